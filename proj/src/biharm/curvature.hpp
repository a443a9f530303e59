#pragma once

// Levi-Civita connection and curvature of a coordinate-chart metric.
//
// Conventions: R(X,Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y] Z and
// Ric(Z,W) = sum_j <R(Z,e_j)e_j, W> over an orthonormal frame, so the round
// unit sphere has positive sectional and Ricci curvature.

#include <vector>

#include <Eigen/Dense>

#include "biharm/chart.hpp"

namespace biharm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kPositiveDefiniteTol = 1e-12;

/// Gamma^c_{ab}, stored [c][a][b].
class Christoffel {
 public:
  explicit Christoffel(int n = 0) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}
  int dim() const { return n_; }
  double& operator()(int c, int a, int b) { return data_[(c * n_ + a) * n_ + b]; }
  double operator()(int c, int a, int b) const { return data_[(c * n_ + a) * n_ + b]; }

 private:
  int n_;
  std::vector<double> data_;
};

/// Coordinate components of the curvature operator.
class Riemann {
 public:
  explicit Riemann(int n = 0)
      : n_(n), up_(static_cast<std::size_t>(n * n * n * n), 0.0), low_(up_.size(), 0.0) {}
  int dim() const { return n_; }
  /// Component d of R(d_a, d_b) d_c.
  double up(int d, int a, int b, int c) const { return up_[idx(d, a, b, c)]; }
  /// <R(d_a, d_b) d_c, d_d>.
  double lowered(int a, int b, int c, int d) const { return low_[idx(a, b, c, d)]; }

  double& up_ref(int d, int a, int b, int c) { return up_[idx(d, a, b, c)]; }
  double& lowered_ref(int a, int b, int c, int d) { return low_[idx(a, b, c, d)]; }

 private:
  std::size_t idx(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }
  int n_;
  std::vector<double> up_;
  std::vector<double> low_;
};

/// Metric, inverse and Christoffel symbols at one point.
struct Connection {
  Matrix metric;
  Matrix inverse;
  Christoffel gamma;
};

struct CurvatureData {
  Matrix metric;
  Matrix inverse;
  Christoffel gamma;
  Riemann riemann;
  Matrix ricci;     // Ric(d_A, d_B)
  Matrix ricci_op;  // g^{-1} Ric
  double scalar = 0.0;
};

Matrix metric_at(const MetricChart& chart, std::span<const double> p);
Matrix inverse_metric_at(const MetricChart& chart, std::span<const double> p);

Connection connection_at(const MetricChart& chart, std::span<const double> p);
Christoffel christoffel_at(const MetricChart& chart, std::span<const double> p);

/// Full curvature bundle: Riemann, Ricci (orthonormal-frame contraction),
/// Ricci operator and scalar curvature.
CurvatureData curvature_at(const MetricChart& chart, std::span<const double> p);

Riemann riemann_at(const MetricChart& chart, std::span<const double> p);
Matrix ricci_at(const MetricChart& chart, std::span<const double> p);
Matrix ricci_operator_at(const MetricChart& chart, std::span<const double> p);
double scalar_curvature_at(const MetricChart& chart, std::span<const double> p);

/// Max over the grid of the largest entry of Ric - (r/dim) h in an orthonormal
/// frame, r the pointwise scalar curvature.
double einstein_deviation(const MetricChart& chart, const std::vector<Point>& grid);

/// Gram-Schmidt on the coordinate basis in index order; column k is e_k.
Matrix orthonormal_frame(const Matrix& metric);

/// Throws a numerical error (with the smallest eigenvalue) unless the symmetric
/// matrix is positive definite.
void check_positive_definite(const Matrix& m, const std::string& what);

/// Ric(Z,W) = sum_j <R(Z,e_j)e_j,W> with the given orthonormal frame.
Matrix ricci_from_frame(const Riemann& riemann, const Matrix& frame);
/// Ric_{AD} = g^{BC} <R(d_A,d_B)d_C, d_D>.
Matrix ricci_from_trace(const Riemann& riemann, const Matrix& inverse);

/// <R(X,Y)Y,X> / (|X|^2|Y|^2 - <X,Y>^2).
double sectional_curvature(const CurvatureData& data, const Vector& x, const Vector& y);

}  // namespace biharm
