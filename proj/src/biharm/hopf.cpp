#include "biharm/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "biharm/families.hpp"

namespace biharm {

namespace {

ScalarField constant_1d(double c) { return ScalarField::constant(1, c); }

double eval_1d(const ScalarField& f, double s) { return f(std::vector<double>{s}); }

struct Frame {
  Vector X, xi, V;
};

struct Registered {
  MetricChart chart;
  std::vector<Point> points;
  Frame (*frame)(const MetricChart&, const Point&);
};

Frame product_frame(const MetricChart& chart, const Point& p) {
  const Matrix g = metric_at(chart, p);
  Frame f{Vector::Zero(3), Vector::Zero(3), Vector::Zero(3)};
  f.X(1) = 1.0 / std::sqrt(g(1, 1));
  f.xi(0) = 1.0;
  f.V(2) = 1.0;
  return f;
}

// Hopf coordinates: d eta^2 + cos^2 eta d xi1^2 + sin^2 eta d xi2^2, fibres along d xi1 + d xi2.
Frame hopf_frame(const MetricChart&, const Point& p) {
  const double s = std::sin(p[0]), c = std::cos(p[0]);
  Frame f{Vector::Zero(3), Vector::Zero(3), Vector::Zero(3)};
  f.X(0) = 1.0;
  f.xi(1) = s * s / (s * c);
  f.xi(2) = -c * c / (s * c);
  f.V(1) = f.V(2) = 1.0;
  return f;
}

Registered registered(const std::string& name) {
  FamilySpec spec;
  if (name == "s3") spec.name = "s3_hopf";
  else if (name == "s2xr" || name == "h2xr") spec.name = name;
  else if (name == "r3") {
    spec.name = "custom";
    spec.coords = {"rho", "theta", "t"};
    spec.metric = {{"1", "0", "0"}, {"0", "rho^2", "0"}, {"0", "0", "1"}};
    const double inf = std::numeric_limits<double>::infinity();
    spec.domain = {{0.1, inf}, {-inf, inf}, {-inf, inf}};
    spec.sample = {{0.5, 2.0}, {0.0, 1.0}, {0.0, 1.0}};
  } else {
    throw invalid_argument("ambient '" + name + "' has no registered chart (registered: s3, s2xr, h2xr, r3)");
  }
  Registered r{build_family(spec), {}, name == "s3" ? hopf_frame : product_frame};
  for (double x : {0.5, 0.75, 1.0}) r.points.push_back({x, 0.3, 0.7});
  return r;
}

double circle_slice_value(const std::string& name, double kappa) {
  const double k = std::abs(kappa);
  if (name == "s2xr") return std::atan2(1.0, k);
  if (name == "s3") return std::atan(0.5 * (k + std::sqrt(k * k + 4.0)));
  if (name == "h2xr") {
    if (!(k > 1.0))
      throw Error(ErrorKind::NotApplicable, "circles in H^2 have curvature > 1; got " + std::to_string(k));
    return std::atanh(1.0 / k);
  }
  if (name == "r3") {
    if (!(k > 0.0)) throw Error(ErrorKind::NotApplicable, "a straight line has no circle in the polar chart");
    return 1.0 / k;
  }
  throw invalid_argument("ambient '" + name + "' has no registered chart");
}

}  // namespace

SubmersionAmbient builtin_ambient(const std::string& name) {
  auto make = [&](double tau, double ric) {
    return SubmersionAmbient{name, tau, constant_1d(ric), constant_1d(0.0), constant_1d(0.0)};
  };
  if (name == "s3") return make(1.0, 2.0);
  if (name == "s2xr") return make(0.0, 1.0);
  if (name == "h2xr") return make(0.0, -1.0);
  if (name == "r3") return make(0.0, 0.0);
  throw invalid_argument("unknown ambient '" + name + "' (built-ins: s3, s2xr, h2xr, r3)");
}

std::vector<std::string> builtin_ambient_names() { return {"s3", "s2xr", "h2xr", "r3"}; }

bool has_registered_chart(const std::string& name) {
  const auto names = builtin_ambient_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

CurveProfile constant_profile(double kappa, Interval domain) { return {constant_1d(kappa), domain}; }

std::array<double, 3> last_system_residuals(const SubmersionAmbient& amb, const CurveProfile& prof,
                                            double s) {
  if (!std::isfinite(amb.tau)) throw invalid_argument("torsion must be finite");
  if (!prof.domain.contains(s)) {
    std::ostringstream os;
    os << "arclength " << s << " is not interior to the profile domain (" << prof.domain.lo << ", "
       << prof.domain.hi << ")";
    throw domain_error(os.str());
  }
  const Jet2 k = prof.kappa.jet(std::vector<double>{s});
  const double kv = k.value(), k1 = k.d(0), k2 = k.d2(0, 0);
  const double t = amb.tau;
  return {k2 - kv * (kv * kv + 2.0 * t * t) + kv * eval_1d(amb.ric_xi_xi, s),
          3.0 * k1 * kv - 2.0 * kv * eval_1d(amb.ric_xi_x, s),
          k1 * t + kv * eval_1d(amb.ric_xi_v, s)};
}

std::vector<double> constant_solutions(const SubmersionAmbient& amb) {
  for (const ScalarField* f : {&amb.ric_xi_xi, &amb.ric_xi_x, &amb.ric_xi_v})
    if (!f->is_constant())
      throw Error(ErrorKind::NotApplicable,
                  "constant-solution analysis needs constant Ricci entries; got " + f->describe());
  const double s0 = 0.0;
  const double rxx = eval_1d(amb.ric_xi_xi, s0);
  const double disc = rxx - 2.0 * amb.tau * amb.tau;
  if (disc > 0.0 && eval_1d(amb.ric_xi_x, s0) == 0.0 && eval_1d(amb.ric_xi_v, s0) == 0.0)
    return {0.0, std::sqrt(disc)};
  return {0.0};
}

double crosscheck_ambient(const SubmersionAmbient& amb) {
  const Registered reg = registered(amb.name);
  double worst = 0.0;
  for (const Point& p : reg.points) {
    const Frame f = reg.frame(reg.chart, p);
    const Connection con = connection_at(reg.chart, p);
    const Matrix& g = con.metric;
    // The frame must be orthonormal for the entries to mean anything.
    Matrix basis(3, 3);
    basis << f.X, f.xi, f.V;
    worst = std::max(worst, (basis.transpose() * g * basis - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff());

    const Matrix ric = ricci_at(reg.chart, p);
    // <xi, V> vanishes along X, so tau = <nabla_X xi, V> = -<xi, nabla_X V> for
    // the constant-coefficient V used by every registered frame.
    Vector nabla_x_v = Vector::Zero(3);
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) nabla_x_v(c) += con.gamma(c, a, b) * f.X(a) * f.V(b);
    const double tau = -f.xi.dot(g * nabla_x_v);
    worst = std::max(worst, std::abs(std::abs(tau) - std::abs(amb.tau)));

    const double s = 0.0;
    worst = std::max(worst, std::abs(f.xi.dot(ric * f.xi) - eval_1d(amb.ric_xi_xi, s)));
    worst = std::max(worst, std::abs(f.xi.dot(ric * f.X) - eval_1d(amb.ric_xi_x, s)));
    worst = std::max(worst, std::abs(f.xi.dot(ric * f.V) - eval_1d(amb.ric_xi_v, s)));
  }
  return worst;
}

HopfReport classify_hopf(const SubmersionAmbient& amb, const CurveProfile& prof,
                         const std::vector<double>& grid, double tol) {
  if (grid.empty()) throw invalid_argument("classify_hopf needs a nonempty grid");
  if (!(tol > 0.0)) throw invalid_argument("tolerance must be positive");
  HopfReport rep;
  rep.grid = grid;
  rep.tol = tol;
  if (has_registered_chart(amb.name)) {
    rep.crosscheck = crosscheck_ambient(amb);
    if (!(*rep.crosscheck < kCrosscheckTol)) {
      std::ostringstream os;
      os << "ambient '" << amb.name << "' data disagree with its chart (deviation " << *rep.crosscheck
         << "); refusing to classify";
      throw numerical_error(os.str());
    }
  }
  for (double s : grid) {
    const auto r = last_system_residuals(amb, prof, s);
    for (int i = 0; i < 3; ++i) rep.max_residual[i] = std::max(rep.max_residual[i], std::abs(r[i]));
    rep.max_abs_kappa = std::max(rep.max_abs_kappa, std::abs(eval_1d(prof.kappa, s)));
  }
  if (rep.max_abs_kappa < tol) rep.classification = Classification::Minimal;
  else if (*std::max_element(rep.max_residual.begin(), rep.max_residual.end()) < tol)
    rep.classification = Classification::ProperBiharmonic;
  else rep.classification = Classification::NonBiharmonic;
  return rep;
}

HopfSurfaceData hopf_surface_data(const SubmersionAmbient& amb, double kappa) {
  const Registered reg = registered(amb.name);
  const double value = circle_slice_value(amb.name, kappa);
  const SliceLeaf leaf(reg.chart, 0, value);
  const Box sample = leaf.sample();
  Point u;
  for (const Interval& w : sample) u.push_back(0.5 * (w.lo + w.hi));
  const ShapeData shape = shape_at(leaf, u);

  HopfSurfaceData d;
  d.H_formula = 0.5 * std::abs(kappa);
  d.norm_a2_formula = kappa * kappa + 2.0 * amb.tau * amb.tau;
  d.H_frame = std::abs(shape.H);
  d.norm_a2_frame = shape.norm_a2;
  std::ostringstream os;
  os.precision(12);
  os << reg.chart.coords()[0] << " = " << value;
  d.leaf = os.str();
  return d;
}

CircleRadii circle_radii(double kappa) {
  const double k = std::abs(kappa);
  return {std::atan2(1.0, k), 1.0 / std::sqrt(1.0 + k * k)};
}

}  // namespace biharm
