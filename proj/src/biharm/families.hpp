#pragma once

// Built-in metric families and a generic expression-defined chart.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "biharm/chart.hpp"
#include "biharm/expr.hpp"

namespace biharm {

struct WarpFactor {
  std::string exponent;  // w(z); the factor metric is e^{2w} times a flat block
  int dim = 1;
};

struct FamilySpec {
  std::string name;
  ParamMap params;                             // numeric parameters, including sizes m, n, p, q
  std::map<std::string, std::string> exprs;    // expression overrides: f, p, q, lambda
  std::vector<WarpFactor> factors;             // multiply_warped
  // custom charts
  std::vector<std::string> coords;
  std::vector<std::vector<std::string>> metric;
  Box domain;
  Box sample;
};

/// Throws Error(ErrorKind::Constraint) naming the violated parameter constraint.
MetricChart build_family(const FamilySpec& spec);

std::vector<std::string> family_names();

/// Round metric of S^k in nested polar coordinates: the factor multiplying
/// d(names[i])^2, e.g. {"1", "sin(th1)^2", "sin(th1)^2*sin(th2)^2"}.
std::vector<std::string> round_sphere_factors(const std::vector<std::string>& names);

}  // namespace biharm
