#pragma once

// Extrinsic geometry of coordinate-slice hypersurfaces {x_s = const}.

#include <functional>
#include <vector>

#include "biharm/curvature.hpp"

namespace biharm {

/// The leaf {x_s = value} of a chart, parametrised by the remaining m = dim-1
/// coordinates in their original order. The unit normal points towards
/// increasing x_s when orientation is +1.
class SliceLeaf {
 public:
  SliceLeaf(MetricChart chart, int slice_index, double slice_value, int orientation = 1);

  const MetricChart& chart() const { return chart_; }
  int slice_index() const { return slice_; }
  double slice_value() const { return value_; }
  int orientation() const { return orientation_; }
  int dim() const { return chart_.dim() - 1; }

  /// Ambient coordinate index of leaf coordinate i.
  int ambient_index(int i) const { return i < slice_ ? i : i + 1; }
  Point ambient_point(std::span<const double> u) const;

  Box domain() const;
  Box sample() const;

  SliceLeaf flipped() const { return {chart_, slice_, value_, -orientation_}; }

 private:
  MetricChart chart_;
  int slice_;
  double value_;
  int orientation_;
};

struct ShapeData {
  Matrix induced;     // g_ij
  Vector normal;      // xi in the ambient coordinate basis
  Matrix b;           // b(d_i, d_j) = <nabla_{d_i} d_j, xi>
  Matrix A;           // g^{-1} b
  double H = 0.0;     // trace(A) / m
  double norm_a2 = 0.0;
};

ShapeData shape_at(const SliceLeaf& leaf, std::span<const double> u);

Matrix induced_metric(const SliceLeaf& leaf, std::span<const double> u);
Vector unit_normal(const SliceLeaf& leaf, std::span<const double> u);
Matrix second_fundamental_form(const SliceLeaf& leaf, std::span<const double> u);
Matrix shape_operator(const SliceLeaf& leaf, std::span<const double> u);
double mean_curvature(const SliceLeaf& leaf, std::span<const double> u);
double second_form_norm(const SliceLeaf& leaf, std::span<const double> u);

/// Eigenvalues of the pencil (b, g_ind), ascending.
std::vector<double> principal_curvatures(const SliceLeaf& leaf, std::span<const double> u);
/// Max over the grid of (largest - smallest principal curvature).
double umbilicity_deviation(const SliceLeaf& leaf, const std::vector<Point>& grid);

using LeafField = std::function<double(std::span<const double>)>;

inline constexpr double kDefaultLeafStep = 1e-4;

/// g^{ij} d_j f with central differences over the leaf chart.
std::vector<double> leaf_grad(const SliceLeaf& leaf, const LeafField& f, std::span<const double> u,
                              double step = kDefaultLeafStep);

/// Laplace-Beltrami in divergence form, (1/sqrt g) d_i (sqrt g g^{ij} d_j f),
/// with the convention that the Laplacian of x^2 on a line is +2.
double leaf_laplacian(const SliceLeaf& leaf, const LeafField& f, std::span<const double> u,
                      double step = kDefaultLeafStep);

/// Tensor grid with `points_per_axis` evenly spaced values per leaf axis over
/// `window` (default: the leaf's sampling window). One point per axis uses the
/// window midpoint.
std::vector<Point> leaf_grid(const SliceLeaf& leaf, int points_per_axis, const Box* window = nullptr);

}  // namespace biharm
