#include "biharm/biharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace biharm {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Minimal: return "Minimal";
    case Classification::ProperBiharmonic: return "ProperBiharmonic";
    case Classification::NonBiharmonic: return "NonBiharmonic";
  }
  return "NonBiharmonic";
}

Classification classification_from_string(const std::string& s) {
  if (s == "Minimal") return Classification::Minimal;
  if (s == "ProperBiharmonic") return Classification::ProperBiharmonic;
  if (s == "NonBiharmonic") return Classification::NonBiharmonic;
  throw invalid_argument("unknown classification '" + s +
                         "' (expected Minimal, ProperBiharmonic or NonBiharmonic)");
}

namespace {

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

struct LeafCalculus {
  double laplacian_H;
  Vector grad_H;
};

LeafCalculus mean_curvature_derivatives(const SliceLeaf& leaf, std::span<const double> u, double step) {
  const LeafField H = [&leaf](std::span<const double> v) { return shape_at(leaf, v).H; };
  return {leaf_laplacian(leaf, H, u, step), to_vector(leaf_grad(leaf, H, u, step))};
}

}  // namespace

ResidualTerms residual_terms(const SliceLeaf& leaf, std::span<const double> u, double step) {
  const ShapeData shape = shape_at(leaf, u);
  const CurvatureData curv = curvature_at(leaf.chart(), leaf.ambient_point(u));
  const int m = leaf.dim();

  ResidualTerms t;
  t.H = shape.H;
  t.norm_a2 = shape.norm_a2;
  t.induced = shape.induced;
  const Vector ric_xi = curv.ricci * shape.normal;  // Ric(xi, d_A)
  t.ric_xi_xi = shape.normal.dot(ric_xi);
  Vector ric_xi_leaf(m);
  for (int i = 0; i < m; ++i) ric_xi_leaf(i) = ric_xi(leaf.ambient_index(i));
  t.ric_xi_tangent = shape.induced.ldlt().solve(ric_xi_leaf);

  const LeafCalculus calc = mean_curvature_derivatives(leaf, u, step);
  t.laplacian_H = calc.laplacian_H;
  t.grad_H = calc.grad_H;
  t.a_grad_H = shape.A * t.grad_H;

  t.normal = t.laplacian_H - t.H * t.norm_a2 + t.H * t.ric_xi_xi;
  // (m/2) grad H^2 = m H grad H
  t.tangential = 2.0 * t.a_grad_H + m * t.H * t.grad_H - 2.0 * t.H * t.ric_xi_tangent;
  t.tangential_norm = std::sqrt(std::max(0.0, t.tangential.dot(shape.induced * t.tangential)));
  return t;
}

double normal_residual(const SliceLeaf& leaf, std::span<const double> u, double step) {
  return residual_terms(leaf, u, step).normal;
}

std::vector<double> tangential_residual(const SliceLeaf& leaf, std::span<const double> u, double step) {
  return to_std(residual_terms(leaf, u, step).tangential);
}

SpecializedResidual einstein_residual(const SliceLeaf& leaf, std::span<const double> u, double r,
                                      double step, double tol) {
  const Point p = leaf.ambient_point(u);
  const double deviation = einstein_deviation(leaf.chart(), {p});
  if (deviation > tol) {
    std::ostringstream os;
    os << "ambient is not Einstein at " << format_point(p) << " (deviation " << deviation
       << " > " << tol << "); use normal_residual instead";
    throw Error(ErrorKind::NotApplicable, os.str());
  }
  const double scalar = scalar_curvature_at(leaf.chart(), p);
  if (std::abs(scalar - r) > tol * std::max(1.0, std::abs(r))) {
    std::ostringstream os;
    os.precision(12);
    os << "scalar curvature at " << format_point(p) << " is " << scalar << ", not " << r;
    throw Error(ErrorKind::NotApplicable, os.str());
  }
  const ShapeData shape = shape_at(leaf, u);
  const int m = leaf.dim();
  const LeafCalculus calc = mean_curvature_derivatives(leaf, u, step);
  SpecializedResidual out;
  out.normal = calc.laplacian_H - shape.H * shape.norm_a2 + r * shape.H / (m + 1);
  out.tangential = to_std(2.0 * (shape.A * calc.grad_H) + m * shape.H * calc.grad_H);
  return out;
}

SpecializedResidual spaceform_residual(const SliceLeaf& leaf, std::span<const double> u, double C,
                                       double step, double tol) {
  const int m = leaf.dim();
  return einstein_residual(leaf, u, m * (m + 1) * C, step, tol);
}

bool cmc_biharmonic_condition(const SliceLeaf& leaf, const std::vector<Point>& grid, double tol) {
  if (grid.empty()) throw invalid_argument("cmc_biharmonic_condition needs a nonempty grid");
  std::vector<ShapeData> shapes;
  double hmin = INFINITY, hmax = -INFINITY;
  for (const Point& u : grid) {
    shapes.push_back(shape_at(leaf, u));
    hmin = std::min(hmin, shapes.back().H);
    hmax = std::max(hmax, shapes.back().H);
  }
  if (hmax - hmin > tol)
    throw Error(ErrorKind::NotApplicable, "mean curvature is not constant over the grid (spread " +
                                              std::to_string(hmax - hmin) + ")");
  if (std::max(std::abs(hmin), std::abs(hmax)) < tol) return true;  // minimal
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ShapeData& s = shapes[k];
    const Matrix ric = curvature_at(leaf.chart(), leaf.ambient_point(grid[k])).ricci;
    const Vector ric_xi = ric * s.normal;
    if (std::abs(s.normal.dot(ric_xi) - s.norm_a2) > tol) return false;
    Vector leaf_part(leaf.dim());
    for (int i = 0; i < leaf.dim(); ++i) leaf_part(i) = ric_xi(leaf.ambient_index(i));
    const Vector t = s.induced.ldlt().solve(leaf_part);
    if (std::sqrt(std::max(0.0, t.dot(s.induced * t))) > tol) return false;
  }
  return true;
}

Classification classify_values(double max_abs_H, double max_normal, double max_tangential,
                               const Tolerances& tol) {
  if (max_abs_H < tol.minimal) return Classification::Minimal;
  if (max_normal < tol.residual && max_tangential < tol.residual)
    return Classification::ProperBiharmonic;
  return Classification::NonBiharmonic;
}

ResidualReport classify(const SliceLeaf& leaf, const std::vector<Point>& grid, const Tolerances& tol) {
  if (grid.empty()) throw invalid_argument("classify needs a nonempty grid");
  ResidualReport rep;
  rep.grid = grid;
  rep.tolerances = tol;
  for (const Point& u : grid) {
    const ResidualTerms t = residual_terms(leaf, u, tol.step);
    const double scale = residual_scale(t.H, t.norm_a2);
    rep.H.push_back(t.H);
    rep.norm_a2.push_back(t.norm_a2);
    rep.normal.push_back(t.normal);
    rep.tangential_norm.push_back(t.tangential_norm);
    rep.normal_normalized.push_back(std::abs(t.normal) / scale);
    rep.tangential_normalized.push_back(t.tangential_norm / scale);
    rep.max_abs_H = std::max(rep.max_abs_H, std::abs(t.H));
    rep.max_normal = std::max(rep.max_normal, rep.normal_normalized.back());
    rep.max_tangential = std::max(rep.max_tangential, rep.tangential_normalized.back());
  }
  rep.classification = classify_values(rep.max_abs_H, rep.max_normal, rep.max_tangential, tol);
  return rep;
}

std::vector<double> umbilical_einstein_analysis(double r, int m) {
  if (m < 1) throw invalid_argument("umbilical_einstein_analysis needs m >= 1");
  if (!(r > 0.0)) return {0.0};
  const double lambda = std::sqrt(r / (m * (m + 1.0)));
  return {-lambda, 0.0, lambda};
}

}  // namespace biharm
