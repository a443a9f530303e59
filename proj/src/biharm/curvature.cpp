#include "biharm/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace biharm {

namespace {

struct MetricJets {
  int n = 0;
  Matrix g;
  std::vector<double> dg;   // [c][a][b] = d_c g_ab
  std::vector<double> ddg;  // [c][d][a][b] = d_c d_d g_ab

  double d1(int c, int a, int b) const { return dg[(c * n + a) * n + b]; }
  double d2(int c, int d, int a, int b) const { return ddg[((c * n + d) * n + a) * n + b]; }
};

MetricJets metric_jets(const MetricChart& chart, std::span<const double> p, bool second) {
  chart.check_in_domain(p);
  const int n = chart.dim();
  MetricJets j;
  j.n = n;
  j.g = Matrix::Zero(n, n);
  j.dg.assign(static_cast<std::size_t>(n * n * n), 0.0);
  if (second) j.ddg.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a <= b; ++a) {
      const ScalarField& f = chart.component(a, b);
      if (f.is_constant()) {
        j.g(a, b) = j.g(b, a) = f(p);
        continue;
      }
      const Jet2 jet = f.jet(p);
      j.g(a, b) = j.g(b, a) = jet.value();
      for (int c = 0; c < n; ++c) {
        j.dg[(c * n + a) * n + b] = j.dg[(c * n + b) * n + a] = jet.d(c);
        if (!second) continue;
        for (int d = 0; d < n; ++d) {
          const double v = jet.d2(c, d);
          j.ddg[((c * n + d) * n + a) * n + b] = v;
          j.ddg[((c * n + d) * n + b) * n + a] = v;
        }
      }
    }
  std::ostringstream where;
  where << "metric of chart '" << chart.name() << "' at " << format_point(p);
  check_positive_definite(j.g, where.str());
  return j;
}

Matrix inverse_of(const Matrix& g) {
  Matrix inv = g.ldlt().solve(Matrix::Identity(g.rows(), g.cols()));
  return 0.5 * (inv + inv.transpose());
}

// Gamma_{e,ab} = 1/2 (d_a g_eb + d_b g_ea - d_e g_ab)
Christoffel christoffel_from(const MetricJets& j, const Matrix& inv) {
  const int n = j.n;
  std::vector<double> first(static_cast<std::size_t>(n * n * n));
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        first[(e * n + a) * n + b] = 0.5 * (j.d1(a, e, b) + j.d1(b, e, a) - j.d1(e, a, b));
  Christoffel gamma(n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double s = 0.0;
        for (int e = 0; e < n; ++e) s += inv(c, e) * first[(e * n + a) * n + b];
        gamma(c, a, b) = gamma(c, b, a) = s;
      }
  return gamma;
}

Riemann riemann_from(const MetricJets& j, const Matrix& inv, const Christoffel& gamma) {
  const int n = j.n;
  // dGamma[a][d][b][c] = d_a Gamma^d_{bc}
  //   = -g^{df} d_a g_{fe} Gamma^e_{bc} + 1/2 g^{de} (d_a d_b g_ec + d_a d_c g_eb - d_a d_e g_bc)
  std::vector<double> dgamma(static_cast<std::size_t>(n * n * n * n));
  auto dg_at = [&](int a, int d, int b, int c) -> double& {
    return dgamma[((a * n + d) * n + b) * n + c];
  };
  std::vector<double> tmp(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        // tmp_e = -d_a g_{ef} Gamma^f_{bc} + 1/2 (...)
        for (int e = 0; e < n; ++e) {
          double s = 0.0;
          for (int f = 0; f < n; ++f) s -= j.d1(a, e, f) * gamma(f, b, c);
          s += 0.5 * (j.d2(a, b, e, c) + j.d2(a, c, e, b) - j.d2(a, e, b, c));
          tmp[e] = s;
        }
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += inv(d, e) * tmp[e];
          dg_at(a, d, b, c) = dg_at(a, d, c, b) = s;
        }
      }

  Riemann r(n);
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          double s = dg_at(a, d, b, c) - dg_at(b, d, a, c);
          for (int e = 0; e < n; ++e) s += gamma(d, a, e) * gamma(e, b, c) - gamma(d, b, e) * gamma(e, a, c);
          r.up_ref(d, a, b, c) = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += j.g(d, e) * r.up(e, a, b, c);
          r.lowered_ref(a, b, c, d) = s;
        }
  return r;
}

}  // namespace

void check_positive_definite(const Matrix& m, const std::string& what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numerical_error("eigen-solver failure for " + what);
  const double smallest = es.eigenvalues().minCoeff();
  if (!(smallest > kPositiveDefiniteTol)) {
    std::ostringstream os;
    os.precision(17);
    os << what << " is not positive definite: smallest eigenvalue " << smallest;
    throw numerical_error(os.str());
  }
}

Matrix metric_at(const MetricChart& chart, std::span<const double> p) {
  chart.check_in_domain(p);
  const int n = chart.dim();
  Matrix g(n, n);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a <= b; ++a) g(a, b) = g(b, a) = chart.component(a, b)(p);
  check_positive_definite(g, "metric of chart '" + chart.name() + "' at " + format_point(p));
  return g;
}

Matrix inverse_metric_at(const MetricChart& chart, std::span<const double> p) {
  return inverse_of(metric_at(chart, p));
}

Connection connection_at(const MetricChart& chart, std::span<const double> p) {
  MetricJets j = metric_jets(chart, p, false);
  Matrix inv = inverse_of(j.g);
  Christoffel gamma = christoffel_from(j, inv);
  return {std::move(j.g), std::move(inv), std::move(gamma)};
}

Christoffel christoffel_at(const MetricChart& chart, std::span<const double> p) {
  return connection_at(chart, p).gamma;
}

Matrix orthonormal_frame(const Matrix& metric) {
  const int n = static_cast<int>(metric.rows());
  Matrix frame = Matrix::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    Vector v = frame.col(k);
    for (int pass = 0; pass < 2; ++pass)  // re-orthogonalise once for stability
      for (int j = 0; j < k; ++j) {
        const Vector e = frame.col(j);
        v -= (e.transpose() * metric * v)(0) * e;
      }
    const double norm2 = (v.transpose() * metric * v)(0);
    if (!(norm2 > 0.0)) throw numerical_error("degenerate metric in Gram-Schmidt");
    frame.col(k) = v / std::sqrt(norm2);
  }
  return frame;
}

Matrix ricci_from_frame(const Riemann& riemann, const Matrix& frame) {
  const int n = riemann.dim();
  Matrix ric = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const Vector e = frame.col(j);
    for (int a = 0; a < n; ++a)
      for (int d = a; d < n; ++d) {
        double s = 0.0;
        for (int b = 0; b < n; ++b) {
          if (e(b) == 0.0) continue;
          for (int c = 0; c < n; ++c) s += e(b) * e(c) * riemann.lowered(a, b, c, d);
        }
        ric(a, d) += s;
      }
  }
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < a; ++d) ric(a, d) = ric(d, a);
  return ric;
}

Matrix ricci_from_trace(const Riemann& riemann, const Matrix& inverse) {
  const int n = riemann.dim();
  Matrix ric = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) s += inverse(b, c) * riemann.lowered(a, b, c, d);
      ric(a, d) = s;
    }
  return ric;
}

CurvatureData curvature_at(const MetricChart& chart, std::span<const double> p) {
  MetricJets j = metric_jets(chart, p, true);
  CurvatureData out;
  out.inverse = inverse_of(j.g);
  out.gamma = christoffel_from(j, out.inverse);
  out.riemann = riemann_from(j, out.inverse, out.gamma);
  out.metric = j.g;
  out.ricci = ricci_from_frame(out.riemann, orthonormal_frame(out.metric));
  out.ricci_op = out.inverse * out.ricci;
  out.scalar = out.ricci_op.trace();
  return out;
}

Riemann riemann_at(const MetricChart& chart, std::span<const double> p) {
  return curvature_at(chart, p).riemann;
}

Matrix ricci_at(const MetricChart& chart, std::span<const double> p) {
  return curvature_at(chart, p).ricci;
}

Matrix ricci_operator_at(const MetricChart& chart, std::span<const double> p) {
  return curvature_at(chart, p).ricci_op;
}

double scalar_curvature_at(const MetricChart& chart, std::span<const double> p) {
  return curvature_at(chart, p).scalar;
}

double einstein_deviation(const MetricChart& chart, const std::vector<Point>& grid) {
  if (grid.empty()) throw invalid_argument("einstein_deviation needs a nonempty grid");
  double worst = 0.0;
  const int n = chart.dim();
  for (const Point& p : grid) {
    const CurvatureData c = curvature_at(chart, p);
    const Matrix frame = orthonormal_frame(c.metric);
    const Matrix ric_on = frame.transpose() * c.ricci * frame;
    const Matrix dev = ric_on - (c.scalar / n) * Matrix::Identity(n, n);
    worst = std::max(worst, dev.cwiseAbs().maxCoeff());
  }
  return worst;
}

double sectional_curvature(const CurvatureData& data, const Vector& x, const Vector& y) {
  const int n = data.riemann.dim();
  double num = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) num += x(a) * y(b) * y(c) * x(d) * data.riemann.lowered(a, b, c, d);
  const double xx = x.dot(data.metric * x), yy = y.dot(data.metric * y), xy = x.dot(data.metric * y);
  const double area2 = xx * yy - xy * xy;
  if (!(area2 > 0.0)) throw invalid_argument("sectional curvature needs independent vectors");
  return num / area2;
}

}  // namespace biharm
