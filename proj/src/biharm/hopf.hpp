#pragma once

// Hopf cylinders over a curve of geodesic curvature kappa in the base of a
// Riemannian submersion with totally geodesic fibres. The frame {X, xi, V}
// is X tangent to the horizontal lift, xi the horizontal normal, V the fibre.
//
//   kappa'' - kappa (kappa^2 + 2 tau^2) + kappa Ric(xi, xi) = 0
//   3 kappa' kappa - 2 kappa Ric(xi, X) = 0
//   kappa' tau + kappa Ric(xi, V) = 0

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "biharm/biharmonic.hpp"

namespace biharm {

struct SubmersionAmbient {
  std::string name;
  double tau = 0.0;
  // Functions of the arclength parameter (one variable).
  ScalarField ric_xi_xi;
  ScalarField ric_xi_x;
  ScalarField ric_xi_v;
};

/// "s3" (Hopf fibration of the unit sphere), "s2xr", "h2xr", "r3".
SubmersionAmbient builtin_ambient(const std::string& name);
std::vector<std::string> builtin_ambient_names();
bool has_registered_chart(const std::string& ambient_name);

struct CurveProfile {
  ScalarField kappa;  // of arclength s
  Interval domain;
};

CurveProfile constant_profile(double kappa, Interval domain = {-1.0, 1.0});

std::array<double, 3> last_system_residuals(const SubmersionAmbient& ambient, const CurveProfile& profile,
                                            double s);

/// Admissible constant curvatures, ascending. Throws NotApplicable when a
/// Ricci entry is not constant.
std::vector<double> constant_solutions(const SubmersionAmbient& ambient);

/// Max deviation of the declared tau (in absolute value) and Ricci frame
/// entries from the curvature engine on the registered chart.
double crosscheck_ambient(const SubmersionAmbient& ambient);

inline constexpr double kCrosscheckTol = 1e-6;

struct HopfReport {
  Classification classification = Classification::NonBiharmonic;
  std::vector<double> grid;
  std::array<double, 3> max_residual{};
  double max_abs_kappa = 0.0;
  std::optional<double> crosscheck;  // absent for unregistered ambients
  double tol = 0.0;
};

/// Cross-checks registered ambients first and refuses (Numerical error) when
/// the declared data disagree with the curvature engine.
HopfReport classify_hopf(const SubmersionAmbient& ambient, const CurveProfile& profile,
                         const std::vector<double>& grid, double tol);

/// Closed-form surface data next to a direct slice-leaf computation of the
/// cylinder over the circle of curvature kappa on the registered chart.
struct HopfSurfaceData {
  double H_formula = 0.0;       // kappa / 2
  double norm_a2_formula = 0.0; // kappa^2 + 2 tau^2
  double H_frame = 0.0;         // |H| of the slice leaf
  double norm_a2_frame = 0.0;
  std::string leaf;             // e.g. "rho = 0.785398"
};

HopfSurfaceData hopf_surface_data(const SubmersionAmbient& ambient, double kappa);

/// Radii of a circle of geodesic curvature kappa in the unit 2-sphere.
struct CircleRadii {
  double geodesic = 0.0;  // arccot(kappa)
  double chordal = 0.0;   // sin(geodesic) = 1/sqrt(1 + kappa^2)
};

CircleRadii circle_radii(double kappa);

}  // namespace biharm
