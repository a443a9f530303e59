#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "biharm/biharm.h"

TEST_CASE("chart lifecycle and curvature through the C API") {
  bh_chart* chart = nullptr;
  REQUIRE(bh_chart_create(R"({"name": "sphere_polar", "params": {"n": 2}})", &chart) == BH_OK);
  CHECK(bh_chart_dim(chart) == 3);
  const char* name = nullptr;
  REQUIRE(bh_chart_coord_name(chart, 0, &name) == BH_OK);
  CHECK(std::string(name) == "rho");
  CHECK(bh_chart_coord_name(chart, 7, &name) == BH_INVALID_ARGUMENT);

  const double p[3] = {1.0, 0.8, 0.3};
  double g[9], ric[9], scalar = 0;
  REQUIRE(bh_metric(chart, p, 3, g) == BH_OK);
  CHECK(g[0] == 1.0);
  CHECK(g[4] == doctest::Approx(std::sin(1.0) * std::sin(1.0)));
  REQUIRE(bh_ricci(chart, p, 3, ric) == BH_OK);
  CHECK(ric[0] == doctest::Approx(2.0));
  REQUIRE(bh_scalar_curvature(chart, p, 3, &scalar) == BH_OK);
  CHECK(scalar == doctest::Approx(6.0));
  double gamma[27], riem[81];
  CHECK(bh_christoffel(chart, p, 3, gamma) == BH_OK);
  CHECK(bh_riemann_lowered(chart, p, 3, riem) == BH_OK);
  CHECK(riem[0 * 27 + 1 * 9 + 1 * 3 + 0] == doctest::Approx(g[4]));  // <R(d0,d1)d1,d0> = g00 g11 - g01^2
  CHECK(bh_metric(chart, p, 2, g) == BH_INVALID_ARGUMENT);
  const double out[3] = {5.0, 0.8, 0.3};
  CHECK(bh_metric(chart, out, 3, g) == BH_DOMAIN_ERROR);
  CHECK(std::strlen(bh_last_error()) > 0);
  bh_chart_destroy(chart);
  bh_chart_destroy(nullptr);
}

TEST_CASE("bare family names and error statuses") {
  bh_chart* chart = nullptr;
  CHECK(bh_chart_create("euclidean", &chart) == BH_OK);
  CHECK(bh_chart_dim(chart) == 3);
  bh_chart_destroy(chart);
  CHECK(bh_chart_create(R"({"name": "conformal_flat", "params": {"D": 0}})", &chart) == BH_CONSTRAINT_VIOLATION);
  CHECK(std::string(bh_last_error()).find("D != 0") != std::string::npos);
  CHECK(bh_chart_create(R"({"name": "custom", "coords": ["x", "y"], "metric": [["1", "0"], ["0", "1+"]]})",
                        &chart) == BH_PARSE_ERROR);
  CHECK(bh_chart_create(nullptr, &chart) == BH_INVALID_ARGUMENT);
  CHECK(bh_chart_create("euclidean", nullptr) == BH_INVALID_ARGUMENT);
  CHECK(std::string(bh_status_name(BH_NOT_APPLICABLE)) == "not applicable");
  CHECK(std::string(bh_classification_name(BH_PROPER_BIHARMONIC)) == "ProperBiharmonic");
}

TEST_CASE("leaves through the C API") {
  bh_chart* chart = nullptr;
  REQUIRE(bh_chart_create(R"({"name": "sphere_polar", "params": {"n": 2}})", &chart) == BH_OK);
  bh_leaf* leaf = nullptr;
  REQUIRE(bh_leaf_create(chart, 0, std::acos(-1.0) / 4, 1, &leaf) == BH_OK);
  bh_chart_destroy(chart);  // the leaf keeps its own copy
  CHECK(bh_leaf_dim(leaf) == 2);
  const double u[2] = {1.0, 0.5};
  double H = 0, a2 = 0, k[2], normal = 1, tang[2];
  REQUIRE(bh_leaf_shape(leaf, u, 2, &H, &a2) == BH_OK);
  CHECK(H == doctest::Approx(-1.0));
  CHECK(a2 == doctest::Approx(2.0));
  REQUIRE(bh_leaf_principal_curvatures(leaf, u, 2, k) == BH_OK);
  CHECK(k[0] == doctest::Approx(-1.0));
  REQUIRE(bh_leaf_residuals(leaf, u, 2, 0.0, &normal, tang) == BH_OK);
  CHECK(std::abs(normal) < 1e-6);
  bh_classification c = BH_NON_BIHARMONIC;
  char* report = nullptr;
  REQUIRE(bh_leaf_classify(leaf, 3, 1e-6, 1e-8, 1e-4, &c, &report) == BH_OK);
  CHECK(c == BH_PROPER_BIHARMONIC);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("ProperBiharmonic") != std::string::npos);
  bh_string_free(report);
  CHECK(bh_leaf_classify(leaf, 3, 1e-6, 1e-8, 1e-4, &c, nullptr) == BH_OK);
  CHECK(bh_leaf_classify(leaf, 0, 1e-6, 1e-8, 1e-4, &c, nullptr) == BH_INVALID_ARGUMENT);
  bh_leaf_destroy(leaf);
}

TEST_CASE("analysis helpers through the C API") {
  double s[3];
  size_t n = 0;
  REQUIRE(bh_umbilical_einstein(6.0, 2, s, &n) == BH_OK);
  CHECK(n == 3);
  CHECK(s[2] == doctest::Approx(1.0));

  double dev = 1;
  REQUIRE(bh_ode_verify("conformal", 1.0, 1.0, 0.0, 2.0, 1000, &dev) == BH_OK);
  CHECK(dev < 1e-8);
  CHECK(bh_ode_verify("conformal", 1.0, 1.0, -2.0, 0.0, 1000, &dev) == BH_DOMAIN_ERROR);
  CHECK(bh_ode_verify("parabola", 1.0, 1.0, 0.0, 1.0, 10, &dev) == BH_INVALID_ARGUMENT);

  double k[2];
  REQUIRE(bh_hopf_constant_solutions("\"s2xr\"", k, &n) == BH_OK);
  CHECK(n == 2);
  CHECK(k[1] == 1.0);
  CHECK(bh_hopf_constant_solutions(R"({"name": "x", "tau": 0, "ric_xi_xi": "s"})", k, &n) == BH_NOT_APPLICABLE);
  REQUIRE(bh_hopf_crosscheck("\"s3\"", &dev) == BH_OK);
  CHECK(dev < 1e-9);
  bh_classification c;
  double res[3];
  REQUIRE(bh_hopf_classify("\"s2xr\"", "1", -1, 1, 9, 1e-8, &c, res) == BH_OK);
  CHECK(c == BH_PROPER_BIHARMONIC);
  CHECK(bh_hopf_classify(R"({"name": "s2xr", "tau": 0.5})", "1", -1, 1, 9, 1e-8, &c, res) == BH_NUMERICAL_ERROR);
}

TEST_CASE("run_config through the C API") {
  char *out = nullptr, *msg = nullptr;
  int code = -1;
  const char* cfg = R"({"command": "check", "family": "sphere_polar",
                        "leaf": {"slice": "rho", "value": "pi/2"}, "expect": "Minimal"})";
  REQUIRE(bh_run_config(cfg, nullptr, &out, &msg, &code) == BH_OK);
  CHECK(code == 0);
  CHECK(std::string(out).find("Minimal") != std::string::npos);
  bh_string_free(out);
  bh_string_free(msg);
  REQUIRE(bh_run_config(cfg, R"({"expect": "NonBiharmonic", "grid": 2})", &out, &msg, &code) == BH_OK);
  CHECK(code == 1);
  bh_string_free(out);
  bh_string_free(msg);
  REQUIRE(bh_run_config("{", nullptr, &out, &msg, &code) == BH_OK);
  CHECK(code == 2);
  CHECK(std::strlen(msg) > 0);
  bh_string_free(out);
  bh_string_free(msg);
  CHECK(bh_run_config(cfg, "[1]", &out, &msg, &code) == BH_INVALID_ARGUMENT);
}
