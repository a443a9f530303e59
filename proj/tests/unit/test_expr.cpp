#include <doctest.h>

#include <cmath>
#include <random>

#include "biharm/expr.hpp"
#include "biharm/families.hpp"

using namespace biharm;
using doctest::Approx;

namespace {

double eval(const std::string& text, const ParamMap& params = {}, std::vector<std::string> coords = {},
            std::vector<double> at = {}) {
  return bind_and_eval(parse_expression(text), params, coords, at).value();
}

}  // namespace

TEST_CASE("D/(z+E) parses as a division over a sum") {
  const ExprPtr e = parse_expression("D/(z+E)");
  REQUIRE(e->kind == Expr::Kind::Div);
  CHECK(e->args[0]->kind == Expr::Kind::Ident);
  CHECK(e->args[0]->name == "D");
  CHECK(e->args[1]->kind == Expr::Kind::Add);
  CHECK(identifiers(*e) == std::vector<std::string>{"D", "E", "z"});
}

TEST_CASE("0.5*ln(A*z+B) at A=1, B=1, z=0") {
  CHECK(eval("0.5*ln(A*z+B)", {{"A", 1}, {"B", 1}}, {"z"}, {0.0}) == 0.0);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval("2*z^2+1", {}, {"z"}, {3.0}) == 19.0);
  CHECK(eval("-z^2", {}, {"z"}, {3.0}) == -9.0);
  CHECK(eval("2^3^2") == 512.0);
  CHECK(eval("2^-1") == 0.5);
  CHECK(eval("8/4/2") == 1.0);
  CHECK(eval("8-4-2") == 2.0);
  CHECK(eval("--3") == 3.0);
  CHECK(eval("2*-3") == -6.0);
  CHECK(eval("1e-3*2E2") == Approx(0.2));
  CHECK(eval("pi") == Approx(std::acos(-1.0)).epsilon(1e-16));
}

TEST_CASE("functions") {
  CHECK(eval("sin(0)+cos(0)+tan(0)+sinh(0)+cosh(0)+exp(0)+ln(1)+sqrt(4)+abs(-3)") == 8.0);
}

TEST_CASE("bind_and_eval 1/(z+1) at z=1") {
  const Jet2 j = bind_and_eval(parse_expression("1/(z+1)"), {}, std::vector<std::string>{"z"},
                               std::vector<double>{1.0});
  CHECK(j.value() == 0.5);
  CHECK(j.d(0) == -0.25);
  CHECK(j.d2(0, 0) == 0.25);
}

TEST_CASE("bind_and_eval sqrt(A*t+B) with A=2, B=1 at t=0") {
  const Jet2 j = bind_and_eval(parse_expression("sqrt(A*t+B)"), {{"A", 2}, {"B", 1}},
                               std::vector<std::string>{"t"}, std::vector<double>{0.0});
  CHECK(j.value() == 1.0);
  CHECK(j.d(0) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("ln of a negative number is a domain error") {
  try {
    eval("ln(z)", {}, {"z"}, {-1.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  CHECK_THROWS_AS(eval("sqrt(z)", {}, {"z"}, {-1.0}), Error);
  CHECK_THROWS_AS(eval("z^0.5", {}, {"z"}, {-1.0}), Error);
  CHECK(eval("z^3", {}, {"z"}, {-2.0}) == -8.0);  // integer powers allow negative bases
}

TEST_CASE("parse errors carry the position") {
  for (const char* bad : {"1+", "(z", "z)", "2**3", "sin(", "foo(1)", "3 4", "", "1.2.3", "#"}) {
    try {
      parse_expression(bad);
      FAIL("expected a parse error for: " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
  }
}

TEST_CASE("unbound identifiers are reported at bind time") {
  const ExprPtr e = parse_expression("a*z");
  try {
    bind(e, std::vector<std::string>{"z"}, {});
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::InvalidArgument);
    CHECK(std::string(err.what()).find("'a'") != std::string::npos);
  }
}

TEST_CASE("print/parse round trip on the built-in corpus") {
  std::vector<std::string> corpus{"D/(z+E)", "0.5*ln(A*z+B)", "0.5*ln(C*z+D)", "sqrt(A*t+B)", "2*z^2+1",
                                  "-z^2", "(-z)^2", "2^3^2", "(2^3)^2", "a-(b-c)", "a-b-c", "a/(b*c)",
                                  "a/b*c", "-(a+b)", "sin(x)^2*cos(y)", "exp(2*(0.5*ln(z+1)))",
                                  "(D/(z+E))^-2", "1e-07*x", "x^-1.5", "--x"};
  for (const auto& n : round_sphere_factors({"th1", "th2", "th3"})) corpus.push_back(n);
  for (const std::string& text : corpus) {
    const ExprPtr e = parse_expression(text);
    const std::string printed = to_string(*e);
    const ExprPtr back = parse_expression(printed);
    CHECK_MESSAGE(structurally_equal(*e, *back), text << " -> " << printed);
  }
}

TEST_CASE("bound fields match finite differences on random parameters") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  const std::vector<std::string> zc{"z"};
  for (int k = 0; k < 20; ++k) {
    const ParamMap params{{"A", u(rng)}, {"B", u(rng)}, {"D", u(rng)}, {"E", u(rng)}};
    for (const char* text : {"D/(z+E)", "0.5*ln(A*z+B)", "sqrt(A*z+B)", "(D/(z+E))^-2"}) {
      const ScalarField f = make_field(text, zc, params);
      const std::vector<double> p{u(rng)};
      const Jet2 j = f.jet(p);
      CHECK(std::abs(fd_gradient(f, p, 1e-5)[0] - j.d(0)) < 1e-7 * (1 + std::abs(j.d(0))));
      CHECK(std::abs(fd_hessian(f, p, 1e-4)[0] - j.d2(0, 0)) < 1e-5 * (1 + std::abs(j.d2(0, 0))));
    }
  }
}

TEST_CASE("constant folding marks parameter-only fields constant") {
  CHECK(make_field("2*A+1", std::vector<std::string>{"s"}, {{"A", 3}}).is_constant());
  CHECK_FALSE(make_field("2*A+s", std::vector<std::string>{"s"}, {{"A", 3}}).is_constant());
}
