#include "biharm/hypersurface.hpp"

#include <algorithm>
#include <cmath>

namespace biharm {

SliceLeaf::SliceLeaf(MetricChart chart, int slice_index, double slice_value, int orientation)
    : chart_(std::move(chart)), slice_(slice_index), value_(slice_value), orientation_(orientation) {
  if (slice_ < 0 || slice_ >= chart_.dim())
    throw invalid_argument("slice index " + std::to_string(slice_) + " out of range for chart '" +
                           chart_.name() + "'");
  if (orientation_ != 1 && orientation_ != -1) throw invalid_argument("orientation must be +1 or -1");
  if (!chart_.domain()[slice_].contains(value_))
    throw domain_error("slice value " + format_point(std::vector<double>{value_}) +
                       " outside the domain of coordinate '" + chart_.coords()[slice_] + "'");
}

Point SliceLeaf::ambient_point(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dim())
    throw invalid_argument("leaf point needs " + std::to_string(dim()) + " coordinates");
  Point p(static_cast<std::size_t>(chart_.dim()));
  for (int i = 0; i < dim(); ++i) p[ambient_index(i)] = u[i];
  p[slice_] = value_;
  return p;
}

Box SliceLeaf::domain() const {
  Box out;
  for (int i = 0; i < dim(); ++i) out.push_back(chart_.domain()[ambient_index(i)]);
  return out;
}

Box SliceLeaf::sample() const {
  Box out;
  for (int i = 0; i < dim(); ++i) out.push_back(chart_.sample()[ambient_index(i)]);
  return out;
}

namespace {

Matrix leaf_block(const SliceLeaf& leaf, const Matrix& ambient) {
  const int m = leaf.dim();
  Matrix g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = ambient(leaf.ambient_index(i), leaf.ambient_index(j));
  return g;
}

}  // namespace

ShapeData shape_at(const SliceLeaf& leaf, std::span<const double> u) {
  const Point p = leaf.ambient_point(u);
  const Connection con = connection_at(leaf.chart(), p);
  const int s = leaf.slice_index();
  const int m = leaf.dim();

  ShapeData d;
  d.induced = leaf_block(leaf, con.metric);
  check_positive_definite(d.induced, "induced metric of leaf at " + format_point(u));

  // xi is the normalised gradient of x_s: xi^A = g^{As} / sqrt(g^{ss}).
  const double gss = con.inverse(s, s);
  const double scale = leaf.orientation() / std::sqrt(gss);
  d.normal = con.inverse.col(s) * scale;

  // b_ij = Gamma^C_ij <d_C, xi> = Gamma^s_ij * orientation / sqrt(g^{ss})
  d.b.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      d.b(i, j) = d.b(j, i) = con.gamma(s, leaf.ambient_index(i), leaf.ambient_index(j)) * scale;

  d.A = d.induced.ldlt().solve(d.b);
  d.H = d.A.trace() / m;
  const Matrix frame = orthonormal_frame(d.induced);
  const Matrix b_on = frame.transpose() * d.b * frame;
  d.norm_a2 = b_on.squaredNorm();
  return d;
}

Matrix induced_metric(const SliceLeaf& leaf, std::span<const double> u) {
  const Matrix g = leaf_block(leaf, metric_at(leaf.chart(), leaf.ambient_point(u)));
  check_positive_definite(g, "induced metric of leaf at " + format_point(u));
  return g;
}

Vector unit_normal(const SliceLeaf& leaf, std::span<const double> u) { return shape_at(leaf, u).normal; }
Matrix second_fundamental_form(const SliceLeaf& leaf, std::span<const double> u) { return shape_at(leaf, u).b; }
Matrix shape_operator(const SliceLeaf& leaf, std::span<const double> u) { return shape_at(leaf, u).A; }
double mean_curvature(const SliceLeaf& leaf, std::span<const double> u) { return shape_at(leaf, u).H; }
double second_form_norm(const SliceLeaf& leaf, std::span<const double> u) { return shape_at(leaf, u).norm_a2; }

std::vector<double> principal_curvatures(const SliceLeaf& leaf, std::span<const double> u) {
  const ShapeData d = shape_at(leaf, u);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(d.b, d.induced, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("principal curvature eigen-solver failed at " + format_point(u));
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

double umbilicity_deviation(const SliceLeaf& leaf, const std::vector<Point>& grid) {
  if (grid.empty()) throw invalid_argument("umbilicity_deviation needs a nonempty grid");
  double worst = 0.0;
  for (const Point& u : grid) {
    const auto k = principal_curvatures(leaf, u);
    worst = std::max(worst, k.back() - k.front());
  }
  return worst;
}

namespace {

void check_stencil(const SliceLeaf& leaf, std::span<const double> u, double reach) {
  const Box box = leaf.domain();
  for (int i = 0; i < leaf.dim(); ++i) {
    if (!box[i].contains(u[i] - reach) || !box[i].contains(u[i] + reach))
      throw domain_error("leaf stencil along coordinate " + std::to_string(i) + " ('" +
                         leaf.chart().coords()[leaf.ambient_index(i)] +
                         "') leaves the leaf domain at " + format_point(u));
  }
}

// Central-difference partials of f at v.
std::vector<double> partials(const LeafField& f, std::vector<double> v, double step) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v[i];
    v[i] = x + step;
    const double fp = f(v);
    v[i] = x - step;
    const double fm = f(v);
    v[i] = x;
    out[i] = (fp - fm) / (2.0 * step);
  }
  return out;
}

}  // namespace

std::vector<double> leaf_grad(const SliceLeaf& leaf, const LeafField& f, std::span<const double> u,
                              double step) {
  if (!(step > 0.0)) throw invalid_argument("step must be positive");
  check_stencil(leaf, u, step);
  const std::vector<double> v(u.begin(), u.end());
  const auto df = partials(f, v, step);
  const Matrix g = induced_metric(leaf, u);
  const Vector grad = g.ldlt().solve(Eigen::Map<const Vector>(df.data(), static_cast<Eigen::Index>(df.size())));
  return {grad.data(), grad.data() + grad.size()};
}

double leaf_laplacian(const SliceLeaf& leaf, const LeafField& f, std::span<const double> u,
                      double step) {
  if (!(step > 0.0)) throw invalid_argument("step must be positive");
  check_stencil(leaf, u, 2.0 * step);
  const int m = leaf.dim();
  // F^i(v) = sqrt(det g) g^{ij} d_j f, then central differences of F^i along i.
  auto flux = [&](const std::vector<double>& v, int i) {
    const Matrix g = induced_metric(leaf, v);
    const auto df = partials(f, v, step);
    const Matrix inv = g.inverse();
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += inv(i, j) * df[j];
    return std::sqrt(g.determinant()) * s;
  };
  std::vector<double> v(u.begin(), u.end());
  double div = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = v[i];
    v[i] = x + step;
    const double fp = flux(v, i);
    v[i] = x - step;
    const double fm = flux(v, i);
    v[i] = x;
    div += (fp - fm) / (2.0 * step);
  }
  return div / std::sqrt(induced_metric(leaf, u).determinant());
}

std::vector<Point> leaf_grid(const SliceLeaf& leaf, int points_per_axis, const Box* window) {
  if (points_per_axis < 1) throw invalid_argument("grid needs at least one point per axis");
  const Box box = window ? *window : leaf.sample();
  const int m = leaf.dim();
  if (static_cast<int>(box.size()) != m) throw invalid_argument("grid window has wrong dimension");
  std::vector<std::vector<double>> axes(m);
  for (int i = 0; i < m; ++i) {
    const Interval w = box[i];
    if (!std::isfinite(w.lo) || !std::isfinite(w.hi)) throw invalid_argument("grid window must be finite");
    if (points_per_axis == 1) axes[i] = {0.5 * (w.lo + w.hi)};
    else
      for (int k = 0; k < points_per_axis; ++k)
        axes[i].push_back(w.lo + (w.hi - w.lo) * k / (points_per_axis - 1));
  }
  std::vector<Point> grid;
  std::vector<int> idx(m, 0);
  for (;;) {
    Point u(m);
    for (int i = 0; i < m; ++i) u[i] = axes[i][idx[i]];
    grid.push_back(std::move(u));
    int k = m - 1;
    while (k >= 0 && ++idx[k] == points_per_axis) idx[k--] = 0;
    if (k < 0) break;
  }
  return grid;
}

}  // namespace biharm
