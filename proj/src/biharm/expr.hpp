#pragma once

// Expression language for scalar fields of chart coordinates.
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | power
//   power  := base ("^" factor)?
//   base   := number | ident | ident "(" expr ")" | "(" expr ")"
//
// `^` is right associative and binds tighter than unary minus, so -z^2 is
// -(z^2) and 2^-1 is 2^(-1). Functions: sin cos tan sinh cosh exp ln sqrt abs.
// The identifier `pi` is predefined unless shadowed by a coordinate or parameter.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biharm/jet.hpp"

namespace biharm {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::string name;  // identifier or function name
  std::vector<ExprPtr> args;
  std::size_t pos = 0;  // offset in the source text
};

using ParamMap = std::map<std::string, double, std::less<>>;

/// Throws Error(ErrorKind::Parse) with the offending position.
ExprPtr parse_expression(std::string_view text);

/// Minimal-parenthesis rendering; parses back to a structurally equal tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Identifiers referenced by the expression, sorted.
std::vector<std::string> identifiers(const Expr& e);

/// Resolve identifiers against coordinates (by position) and parameters, fold
/// constant subtrees, and produce an evaluatable field. Throws
/// Error(ErrorKind::InvalidArgument) on an unbound identifier.
ScalarField bind(const ExprPtr& expr, std::span<const std::string> coords,
                 const ParamMap& params);

/// Parse-free convenience for one-off evaluation in jet arithmetic.
Jet2 bind_and_eval(const ExprPtr& expr, const ParamMap& params,
                   std::span<const std::string> coords, std::span<const double> point);

/// Parse and bind in one step.
ScalarField make_field(std::string_view text, std::span<const std::string> coords,
                       const ParamMap& params = {});

}  // namespace biharm
