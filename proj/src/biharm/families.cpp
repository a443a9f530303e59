#include "biharm/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace biharm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
// Polar coordinate singularities are kept at least this far outside the domain.
constexpr double kPolarMargin = 0.1;

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

bool has(const FamilySpec& s, const std::string& key) { return s.params.count(key) != 0; }

double param(const FamilySpec& s, const std::string& key) {
  auto it = s.params.find(key);
  if (it == s.params.end())
    throw invalid_argument("family '" + s.name + "' needs parameter '" + key + "'");
  return it->second;
}

int size_param(const FamilySpec& s, const std::string& key, int fallback, int min_value) {
  const double v = has(s, key) ? param(s, key) : fallback;
  if (v != std::trunc(v) || v < min_value || v > kMaxDim)
    throw constraint_error("family '" + s.name + "': '" + key + "' must be an integer in [" +
                           std::to_string(min_value) + ", " + std::to_string(kMaxDim) + "]");
  return static_cast<int>(v);
}

std::string expr_or(const FamilySpec& s, const std::string& key, const std::string& fallback) {
  auto it = s.exprs.find(key);
  return it == s.exprs.end() ? fallback : it->second;
}

void require_positive(const FamilySpec& s, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (has(s, k) && !(param(s, k) > 0.0))
      throw constraint_error("family '" + s.name + "': constraint " + k + " > 0 violated (" + k +
                             " = " + num(param(s, k)) + ")");
}

std::vector<std::string> names(const std::string& stem, int count, int first = 1) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) out.push_back(stem + std::to_string(first + i));
  return out;
}

/// Diagonal metric with the given expression per coordinate.
MetricChart diagonal_chart(const FamilySpec& spec, const std::vector<std::string>& coords,
                           const std::vector<std::string>& diag, Box domain, Box sample) {
  const int n = static_cast<int>(coords.size());
  if (n > kMaxDim) throw constraint_error("family '" + spec.name + "': dimension exceeds " +
                                          std::to_string(kMaxDim));
  std::vector<ScalarField> comps(static_cast<std::size_t>(n * n), ScalarField::constant(n, 0.0));
  for (int i = 0; i < n; ++i) comps[i * n + i] = make_field(diag[i], coords, spec.params);
  return MetricChart(spec.name, coords, comps, std::move(domain), std::move(sample));
}

Interval angle_domain() { return {kPolarMargin, kPi - kPolarMargin}; }
Interval angle_sample() { return {1.0, 2.0}; }

/// Appends the coordinates of a round S^k factor scaled by `scale`.
void append_sphere(const std::string& stem, int k, const std::string& scale,
                   std::vector<std::string>& coords, std::vector<std::string>& diag, Box& domain,
                   Box& sample) {
  const auto ns = names(stem, k);
  const auto factors = round_sphere_factors(ns);
  for (int i = 0; i < k; ++i) {
    coords.push_back(ns[i]);
    diag.push_back(factors[i] == "1" ? scale : scale + "*" + factors[i]);
    if (i + 1 < k) {
      domain.push_back(angle_domain());
      sample.push_back(angle_sample());
    } else {
      domain.push_back({-kInf, kInf});
      sample.push_back({0.0, 1.0});
    }
  }
}

MetricChart euclidean(const FamilySpec& s) {
  const int dim = size_param(s, "dim", 3, 2);
  auto coords = names("x", dim - 1);
  coords.push_back("z");
  return diagonal_chart(s, coords, std::vector<std::string>(dim, "1"), Box(dim), Box(dim, {-1, 1}));
}

MetricChart conformal_flat(const FamilySpec& s) {
  const int m = size_param(s, "m", 2, 1);
  if (has(s, "D") && param(s, "D") == 0.0)
    throw constraint_error("family 'conformal_flat': constraint D != 0 violated (D in R\\{0})");
  if (has(s, "E") && has(s, "C") && !(param(s, "E") >= param(s, "C")))
    throw constraint_error("family 'conformal_flat': constraint E >= C violated (E = " +
                           num(param(s, "E")) + ", C = " + num(param(s, "C")) + ")");
  double zmin = -kInf;
  if (has(s, "zmin")) zmin = param(s, "zmin");
  else if (has(s, "C")) zmin = -param(s, "C");
  else if (has(s, "E")) zmin = -param(s, "E");
  const std::string f = expr_or(s, "f", "D/(z+E)");
  auto coords = names("x", m);
  coords.push_back("z");
  std::vector<std::string> diag(m + 1, "(" + f + ")^-2");
  Box domain(m + 1), sample(m + 1, {-1, 1});
  domain[m] = {zmin, kInf};
  sample[m] = {std::max(zmin + 0.5, -1.0), std::max(zmin + 0.5, -1.0) + 2.0};
  return diagonal_chart(s, coords, diag, domain, sample);
}

MetricChart doubly_warped_plane(const FamilySpec& s) {
  require_positive(s, {"A", "B", "C", "D"});
  double zmin = -kInf;
  if (has(s, "zmin")) zmin = param(s, "zmin");
  else if (has(s, "A") && has(s, "B") && has(s, "C") && has(s, "D"))
    zmin = std::max(-param(s, "B") / param(s, "A"), -param(s, "D") / param(s, "C"));
  const std::string p = expr_or(s, "p", "0.5*ln(A*z+B)");
  const std::string q = expr_or(s, "q", "0.5*ln(C*z+D)");
  std::vector<std::string> coords{"x", "y", "z"};
  std::vector<std::string> diag{"exp(2*(" + p + "))", "exp(2*(" + q + "))", "1"};
  Box domain(3), sample(3, {-1, 1});
  domain[2] = {zmin, kInf};
  sample[2] = {0.0, 3.0};
  if (!domain[2].contains(0.0)) sample[2] = {zmin + 0.5, zmin + 3.5};
  return diagonal_chart(s, coords, diag, domain, sample);
}

MetricChart multiply_warped(const FamilySpec& s) {
  if (s.factors.empty())
    throw invalid_argument("family 'multiply_warped' needs at least one warp factor");
  std::vector<std::string> coords, diag;
  int index = 1;
  for (const WarpFactor& f : s.factors) {
    if (f.dim < 1) throw constraint_error("family 'multiply_warped': factor dimension must be >= 1");
    for (int k = 0; k < f.dim; ++k) {
      coords.push_back("x" + std::to_string(index++));
      diag.push_back("exp(2*(" + f.exponent + "))");
    }
  }
  coords.push_back("z");
  diag.push_back("1");
  const int n = static_cast<int>(coords.size());
  if (n > kMaxDim) throw constraint_error("family 'multiply_warped': dimension exceeds " +
                                          std::to_string(kMaxDim));
  Box domain(n), sample(n, {-1, 1});
  const double zmin = has(s, "zmin") ? param(s, "zmin") : -kInf;
  domain[n - 1] = {zmin, kInf};
  sample[n - 1] = std::isfinite(zmin) ? Interval{zmin + 0.5, zmin + 3.5} : Interval{0.0, 3.0};
  return diagonal_chart(s, coords, diag, domain, sample);
}

// dr^2 + w(r)^2 g^{S^n} for a radial warp w.
MetricChart polar(const FamilySpec& s, const std::string& warp, Interval radial, Interval radial_sample) {
  const int n = size_param(s, "n", 2, 1);
  if (n + 1 > kMaxDim) throw constraint_error("family '" + s.name + "': dimension exceeds limit");
  std::vector<std::string> coords{"rho"}, diag{"1"};
  Box domain{radial}, sample{radial_sample};
  append_sphere("th", n, "(" + warp + ")^2", coords, diag, domain, sample);
  return diagonal_chart(s, coords, diag, domain, sample);
}

MetricChart warped_sphere(const FamilySpec& s) {
  require_positive(s, {"A", "B"});
  const std::string lambda = expr_or(s, "lambda", "sqrt(A*t+B)");
  const double tmin = has(s, "tmin") ? param(s, "tmin") : 0.0;
  std::vector<std::string> coords{"rho", "theta", "t"};
  std::vector<std::string> diag{"(" + lambda + ")^2", "(" + lambda + ")^2*sin(rho)^2", "1"};
  Box domain{angle_domain(), {-kInf, kInf}, {tmin, kInf}};
  Box sample{angle_sample(), {0.0, 1.0}, {tmin + 0.5, tmin + 3.0}};
  return diagonal_chart(s, coords, diag, domain, sample);
}

MetricChart clifford_chart(const FamilySpec& s) {
  const int p = size_param(s, "p", 1, 1);
  const int q = size_param(s, "q", 2, 1);
  if (p + q + 1 > kMaxDim) throw constraint_error("family 'clifford_chart': dimension exceeds limit");
  std::vector<std::string> coords{"rho"}, diag{"1"};
  Box domain{{kPolarMargin, kPi / 2 - kPolarMargin}}, sample{{0.5, 1.0}};
  append_sphere("a", p, "cos(rho)^2", coords, diag, domain, sample);
  append_sphere("b", q, "sin(rho)^2", coords, diag, domain, sample);
  return diagonal_chart(s, coords, diag, domain, sample);
}

MetricChart s3_hopf(const FamilySpec& s) {
  std::vector<std::string> coords{"eta", "xi1", "xi2"};
  std::vector<std::string> diag{"1", "cos(eta)^2", "sin(eta)^2"};
  Box domain{{kPolarMargin, kPi / 2 - kPolarMargin}, {-kInf, kInf}, {-kInf, kInf}};
  Box sample{{0.5, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  return diagonal_chart(s, coords, diag, domain, sample);
}

MetricChart surface_times_line(const FamilySpec& s, const std::string& warp, Interval radial) {
  std::vector<std::string> coords{"rho", "theta", "t"};
  std::vector<std::string> diag{"1", warp + "^2", "1"};
  Box domain{radial, {-kInf, kInf}, {-kInf, kInf}};
  Box sample{{0.5, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  return diagonal_chart(s, coords, diag, domain, sample);
}

MetricChart custom(const FamilySpec& s) {
  const int n = static_cast<int>(s.coords.size());
  if (n < 2 || n > kMaxDim) throw invalid_argument("custom chart needs 2.." + std::to_string(kMaxDim) + " coordinates");
  if (static_cast<int>(s.metric.size()) != n)
    throw invalid_argument("custom chart metric must have one row per coordinate");
  std::vector<ScalarField> comps(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(s.metric[a].size()) != n)
      throw invalid_argument("custom chart metric must be square");
    for (int b = a; b < n; ++b) {
      comps[a * n + b] = comps[b * n + a] = make_field(s.metric[a][b], s.coords, s.params);
      if (b != a && s.metric[b][a] != s.metric[a][b] && !s.metric[b][a].empty()) {
        auto lhs = parse_expression(s.metric[a][b]);
        auto rhs = parse_expression(s.metric[b][a]);
        if (!structurally_equal(*lhs, *rhs))
          throw invalid_argument("custom chart metric is not symmetric at (" + std::to_string(a) +
                                 ", " + std::to_string(b) + ")");
      }
    }
  }
  Box domain = s.domain.empty() ? Box(n) : s.domain;
  Box sample = s.sample;
  if (sample.empty()) {
    sample.resize(n);
    for (int i = 0; i < n; ++i) {
      const Interval d = domain[i];
      double lo = std::isfinite(d.lo) ? d.lo : -1.0;
      double hi = std::isfinite(d.hi) ? d.hi : 1.0;
      if (std::isfinite(d.lo) && !std::isfinite(d.hi)) hi = d.lo + 2.0;
      if (!std::isfinite(d.lo) && std::isfinite(d.hi)) lo = d.hi - 2.0;
      const double inset = 0.25 * (hi - lo);
      sample[i] = {lo + inset, hi - inset};
    }
  }
  return MetricChart(s.name, s.coords, comps, domain, sample);
}

}  // namespace

std::vector<std::string> round_sphere_factors(const std::vector<std::string>& ns) {
  std::vector<std::string> out;
  std::string acc;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    out.push_back(acc.empty() ? "1" : acc);
    acc += (acc.empty() ? "" : "*") + ("sin(" + ns[i] + ")^2");
  }
  return out;
}

std::vector<std::string> family_names() {
  return {"euclidean",       "euclidean_polar", "conformal_flat", "doubly_warped_plane",
          "multiply_warped", "sphere_polar",    "hyperbolic_polar", "warped_sphere",
          "clifford_chart",  "s3_hopf",         "s2xr",           "h2xr",
          "custom"};
}

MetricChart build_family(const FamilySpec& s) {
  const std::string& n = s.name;
  if (n == "euclidean") return euclidean(s);
  if (n == "euclidean_polar") return polar(s, "rho", {kPolarMargin, kInf}, {0.5, 2.0});
  if (n == "conformal_flat") return conformal_flat(s);
  if (n == "doubly_warped_plane") return doubly_warped_plane(s);
  if (n == "multiply_warped") return multiply_warped(s);
  if (n == "sphere_polar") return polar(s, "sin(rho)", angle_domain(), {0.5, 1.5});
  if (n == "hyperbolic_polar") return polar(s, "sinh(rho)", {kPolarMargin, kInf}, {0.5, 2.0});
  if (n == "warped_sphere") return warped_sphere(s);
  if (n == "clifford_chart") return clifford_chart(s);
  if (n == "s3_hopf") return s3_hopf(s);
  if (n == "s2xr") return surface_times_line(s, "sin(rho)", angle_domain());
  if (n == "h2xr") return surface_times_line(s, "sinh(rho)", {kPolarMargin, kInf});
  if (n == "custom") return custom(s);
  throw invalid_argument("unknown metric family '" + n + "'");
}

}  // namespace biharm
