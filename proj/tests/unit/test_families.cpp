#include <doctest.h>

#include <cmath>
#include <numbers>

#include "biharm/curvature.hpp"
#include "biharm/families.hpp"
#include "biharm/hypersurface.hpp"
#include "test_support.hpp"

using namespace biharm;
using testsupport::spec;

namespace {

void expect_constraint(const FamilySpec& s, const std::string& needle) {
  try {
    build_family(s);
    FAIL("expected a constraint error for " << s.name);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Constraint);
    CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
  }
}

}  // namespace

TEST_CASE("family names are listed and unknown names rejected") {
  const auto names = family_names();
  CHECK(names.size() == 13);
  CHECK_THROWS_AS(build_family(spec("klein_bottle")), Error);
}

TEST_CASE("constraint violations name the parameter") {
  expect_constraint(spec("conformal_flat", {{"D", 0}, {"E", 1}}), "D != 0");
  expect_constraint(spec("doubly_warped_plane", {{"A", -1}, {"B", 1}, {"C", 1}, {"D", 1}}), "A > 0");
  expect_constraint(spec("doubly_warped_plane", {{"A", 1}, {"B", 1}, {"C", 1}, {"D", 0}}), "D > 0");
  expect_constraint(spec("warped_sphere", {{"A", 1}, {"B", 0}}), "B > 0");
  expect_constraint(spec("sphere_polar", {{"n", 1.5}}), "'n'");
  expect_constraint(spec("clifford_chart", {{"p", 0}, {"q", 2}}), "'p'");
}

TEST_CASE("sphere_polar metric at rho = pi/2") {
  const MetricChart s = build_family(spec("sphere_polar", {{"n", 2}}));
  const double th = 0.7;
  const Matrix g = metric_at(s, Point{std::numbers::pi / 2, th, 0.3});
  CHECK(g(0, 0) == 1.0);
  CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g(2, 2) == doctest::Approx(std::sin(th) * std::sin(th)).epsilon(1e-15));
  CHECK(g(0, 1) == 0.0);
}

TEST_CASE("multiply_warped reproduces the doubly warped plane") {
  FamilySpec mw = spec("multiply_warped", {{"zmin", -0.4}});
  mw.factors = {{"0.5*ln(z+1)", 1}, {"0.5*ln(2*z+1)", 1}};
  const MetricChart a = build_family(mw);
  const MetricChart b = build_family(spec("doubly_warped_plane", {{"A", 1}, {"B", 1}, {"C", 2}, {"D", 1}}));
  const Point p{0.2, -0.3, 0.6};
  CHECK((metric_at(a, p) - metric_at(b, p)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((ricci_at(a, p) - ricci_at(b, p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("every built-in family is positive definite over its sampling window") {
  for (const auto& [label, chart] : testsupport::builtin_charts()) {
    INFO(label);
    const int n = chart.dim();
    // 3 points per axis over the full window, corners included.
    std::vector<int> idx(n, 0);
    for (;;) {
      Point p(n);
      for (int i = 0; i < n; ++i) p[i] = chart.sample()[i].lo + 0.5 * idx[i] * (chart.sample()[i].hi - chart.sample()[i].lo);
      CHECK_NOTHROW(check_positive_definite(metric_at(chart, p), label));
      int k = 0;
      while (k < n && ++idx[k] == 3) idx[k++] = 0;
      if (k == n) break;
    }
  }
}

TEST_CASE("points outside the chart domain are refused") {
  const MetricChart c = build_family(spec("conformal_flat", {{"D", 1}, {"E", 1}}));
  try {
    metric_at(c, Point{0.0, 0.0, -2.0});
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
    CHECK(std::string(e.what()).find("z") != std::string::npos);
  }
}

TEST_CASE("custom charts validate their shape and symmetry") {
  FamilySpec s = spec("custom");
  s.coords = {"x"};
  s.metric = {{"1"}};
  CHECK_THROWS_AS(build_family(s), Error);
  s.coords = {"x", "y"};
  s.metric = {{"1", "x"}, {"y", "1"}};
  CHECK_THROWS_AS(build_family(s), Error);
  s.metric = {{"1", "0"}};
  CHECK_THROWS_AS(build_family(s), Error);
}
