#pragma once

// Biharmonic hypersurface equations for slice leaves.
//
//   normal:      Delta H - H |A|^2 + H Ric(xi, xi)
//   tangential:  2 A(grad H) + (m/2) grad H^2 - 2 H (Ric(xi))^T
//
// A hypersurface is biharmonic iff both vanish; proper biharmonic means
// biharmonic and not minimal.

#include <string>
#include <vector>

#include "biharm/hypersurface.hpp"

namespace biharm {

enum class Classification { Minimal, ProperBiharmonic, NonBiharmonic };

std::string to_string(Classification c);
/// Accepts the names produced by to_string; throws on anything else.
Classification classification_from_string(const std::string& s);

/// Every term of both equations at one leaf point, leaf components throughout.
struct ResidualTerms {
  double H = 0.0;
  double norm_a2 = 0.0;
  double ric_xi_xi = 0.0;
  double laplacian_H = 0.0;
  Vector grad_H;           // g^{ij} d_j H
  Vector a_grad_H;         // A(grad H)
  Vector ric_xi_tangent;   // (Ric(xi))^T
  Matrix induced;
  double normal = 0.0;
  Vector tangential;
  double tangential_norm = 0.0;  // measured with the induced metric
};

ResidualTerms residual_terms(const SliceLeaf& leaf, std::span<const double> u,
                             double step = kDefaultLeafStep);

double normal_residual(const SliceLeaf& leaf, std::span<const double> u,
                       double step = kDefaultLeafStep);
std::vector<double> tangential_residual(const SliceLeaf& leaf, std::span<const double> u,
                                        double step = kDefaultLeafStep);

/// Normalisation applied before comparing residuals with tolerances.
inline double residual_scale(double H, double norm_a2) { return 1.0 + std::abs(H) * norm_a2; }

struct SpecializedResidual {
  double normal = 0.0;
  std::vector<double> tangential;
};

inline constexpr double kEinsteinTol = 1e-6;

/// Einstein specialisation with scalar curvature r. Refuses when the ambient
/// point is not Einstein or its scalar curvature differs from r, both within
/// `tol` (relative to max(1, |r|) for the latter).
SpecializedResidual einstein_residual(const SliceLeaf& leaf, std::span<const double> u, double r,
                                      double step = kDefaultLeafStep, double tol = kEinsteinTol);

/// Constant sectional curvature C, i.e. r = m(m+1)C.
SpecializedResidual spaceform_residual(const SliceLeaf& leaf, std::span<const double> u, double C,
                                       double step = kDefaultLeafStep, double tol = kEinsteinTol);

/// Constant-mean-curvature criterion: minimal, or Ric(xi,xi) = |A|^2 and
/// (Ric(xi))^T = 0 at every grid point. Throws NotApplicable if H varies by
/// more than tol over the grid.
bool cmc_biharmonic_condition(const SliceLeaf& leaf, const std::vector<Point>& grid, double tol);

struct Tolerances {
  double residual = 1e-6;  // on normalised residuals
  double minimal = 1e-8;   // on max |H|
  double step = kDefaultLeafStep;
};

/// Looser residual tolerance for leaves where H varies and the finite-difference
/// Laplacian contributes.
inline constexpr double kFdResidualTol = 1e-4;

struct ResidualReport {
  std::vector<Point> grid;
  std::vector<double> H;
  std::vector<double> norm_a2;
  std::vector<double> normal;                  // raw
  std::vector<double> tangential_norm;         // raw
  std::vector<double> normal_normalized;
  std::vector<double> tangential_normalized;
  double max_abs_H = 0.0;
  double max_normal = 0.0;                     // normalised
  double max_tangential = 0.0;                 // normalised
  Classification classification = Classification::NonBiharmonic;
  Tolerances tolerances;
};

/// Pure decision rule shared by classify() and report consumers.
Classification classify_values(double max_abs_H, double max_normal, double max_tangential,
                               const Tolerances& tol);

ResidualReport classify(const SliceLeaf& leaf, const std::vector<Point>& grid,
                        const Tolerances& tol = {});

/// Constant principal curvatures admissible for a totally umbilical biharmonic
/// hypersurface in an Einstein (m+1)-space of scalar curvature r, ascending.
std::vector<double> umbilical_einstein_analysis(double r, int m);

}  // namespace biharm
