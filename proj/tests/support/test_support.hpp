#pragma once

// Shared fixtures: built-in family instances and random polynomial metrics.

#include <random>
#include <string>
#include <vector>

#include "biharm/families.hpp"

namespace testsupport {

using biharm::FamilySpec;
using biharm::MetricChart;

struct NamedChart {
  std::string label;
  MetricChart chart;
};

inline FamilySpec spec(std::string name, biharm::ParamMap params = {}) {
  FamilySpec s;
  s.name = std::move(name);
  s.params = std::move(params);
  return s;
}

/// One representative instance of every built-in family (several for the
/// parametrised ones).
inline std::vector<NamedChart> builtin_charts() {
  std::vector<FamilySpec> specs{
      spec("euclidean", {{"dim", 3}}),
      spec("euclidean", {{"dim", 4}}),
      spec("euclidean_polar", {{"n", 2}}),
      spec("conformal_flat", {{"m", 2}, {"D", 1}, {"E", 0}}),
      spec("conformal_flat", {{"m", 3}, {"D", -1.5}, {"E", 0.7}}),
      spec("doubly_warped_plane", {{"A", 1}, {"B", 1}, {"C", 2}, {"D", 1}}),
      spec("sphere_polar", {{"n", 2}}),
      spec("sphere_polar", {{"n", 3}}),
      spec("hyperbolic_polar", {{"n", 2}}),
      spec("hyperbolic_polar", {{"n", 3}}),
      spec("warped_sphere", {{"A", 2}, {"B", 1}}),
      spec("clifford_chart", {{"p", 1}, {"q", 2}}),
      spec("clifford_chart", {{"p", 1}, {"q", 1}}),
      spec("s3_hopf"),
      spec("s2xr"),
      spec("h2xr"),
  };
  FamilySpec mw = spec("multiply_warped", {{"zmin", 0}});
  mw.factors = {{"0.5*ln(z+1)", 1}, {"0.5*ln(2*z+1)", 2}};
  specs.push_back(mw);
  FamilySpec custom = spec("custom");
  custom.coords = {"x", "y", "z"};
  custom.metric = {{"1+x^2", "0.2*x", "0"}, {"0.2*x", "2", "0.1*y"}, {"0", "0.1*y", "exp(z)"}};
  specs.push_back(custom);

  std::vector<NamedChart> out;
  for (const FamilySpec& s : specs) {
    std::string label = s.name;
    for (const auto& [k, v] : s.params) label += " " + k + "=" + std::to_string(v);
    out.push_back({label, biharm::build_family(s)});
  }
  return out;
}

/// Midpoint of the chart's sampling window.
inline biharm::Point sample_midpoint(const MetricChart& chart) {
  biharm::Point p;
  for (const auto& w : chart.sample()) p.push_back(0.5 * (w.lo + w.hi));
  return p;
}

/// Points of the sampling window at fractions 0.25, 0.5, 0.75 along its diagonal.
inline std::vector<biharm::Point> sample_points(const MetricChart& chart) {
  std::vector<biharm::Point> out;
  for (double t : {0.25, 0.5, 0.75}) {
    biharm::Point p;
    for (const auto& w : chart.sample()) p.push_back(w.lo + t * (w.hi - w.lo));
    out.push_back(p);
  }
  return out;
}

inline std::string num(double x) {
  std::string s = std::to_string(x);
  return x < 0 ? "(" + s + ")" : s;
}

/// Random quadratic polynomial in the coordinates with coefficients in [-c, c].
inline std::string random_poly(std::mt19937& rng, const std::vector<std::string>& xs, double c) {
  std::uniform_real_distribution<double> u(-c, c);
  std::string s = num(u(rng));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += "+" + num(u(rng)) + "*" + xs[i];
    for (std::size_t j = i; j < xs.size(); ++j) s += "+" + num(u(rng)) + "*" + xs[i] + "*" + xs[j];
  }
  return s;
}

/// Diagonally dominant polynomial metric, positive definite on [-0.5, 0.5]^n.
inline MetricChart random_polynomial_metric(std::mt19937& rng, int n) {
  FamilySpec s = spec("custom");
  for (int i = 0; i < n; ++i) s.coords.push_back("x" + std::to_string(i + 1));
  s.metric.assign(n, std::vector<std::string>(n));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const std::string p = random_poly(rng, s.coords, a == b ? 0.1 : 0.05);
      s.metric[a][b] = s.metric[b][a] = a == b ? "2+" + p : p;
    }
  s.domain.assign(n, {-0.9, 0.9});
  s.sample.assign(n, {-0.5, 0.5});
  return biharm::build_family(s);
}

inline biharm::Point random_point(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  biharm::Point p(n);
  for (double& x : p) x = u(rng);
  return p;
}

}  // namespace testsupport
