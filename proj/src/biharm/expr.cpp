#include "biharm/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numbers>
#include <set>

namespace biharm {

namespace {

const std::set<std::string, std::less<>> kFunctions = {"sin",  "cos", "tan", "sinh", "cosh",
                                                       "exp",  "ln",  "sqrt", "abs"};

Error parse_error(std::size_t pos, const std::string& msg) {
  return {ErrorKind::Parse, "parse error at position " + std::to_string(pos) + ": " + msg};
}

ExprPtr node(Expr::Kind kind, std::size_t pos, std::vector<ExprPtr> args = {},
             std::string name = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->pos = pos;
  e->args = std::move(args);
  e->name = std::move(name);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw parse_error(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) lhs = node(Expr::Kind::Add, at, {lhs, term()});
      else if (accept('-')) lhs = node(Expr::Kind::Sub, at, {lhs, term()});
      else return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) lhs = node(Expr::Kind::Mul, at, {lhs, factor()});
      else if (accept('/')) lhs = node(Expr::Kind::Div, at, {lhs, factor()});
      else return lhs;
    }
  }

  ExprPtr factor() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) return node(Expr::Kind::Neg, at, {factor()});
    return power();
  }

  ExprPtr power() {
    ExprPtr b = base();
    skip_ws();
    const std::size_t at = pos_;
    if (accept('^')) return node(Expr::Kind::Pow, at, {b, factor()});
    return b;
  }

  ExprPtr base() {
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= text_.size()) throw parse_error(pos_, "unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      std::string name(text_.substr(pos_, end - pos_));
      pos_ = end;
      if (accept('(')) {
        if (!kFunctions.count(name)) throw parse_error(at, "unknown function '" + name + "'");
        ExprPtr arg = expr();
        if (!accept(')')) throw parse_error(pos_, "expected ')'");
        return node(Expr::Kind::Call, at, {arg}, name);
      }
      return node(Expr::Kind::Ident, at, {}, name);
    }
    if (accept('(')) {
      ExprPtr inner = expr();
      if (!accept(')')) throw parse_error(pos_, "expected ')'");
      return inner;
    }
    throw parse_error(pos_, std::string("unexpected '") + c + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      std::size_t k = end;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      return end > k;
    };
    bool any = digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      any = digits() || any;
    }
    if (!any) throw parse_error(start, "malformed number");
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t save = end;
      ++end;
      if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
      if (!digits()) end = save;  // "2e" is 2 followed by identifier e
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    auto res = std::from_chars(first, text_.data() + end, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + end)
      throw parse_error(start, "malformed number");
    pos_ = end;
    auto e = node(Expr::Kind::Number, start);
    std::const_pointer_cast<Expr>(e)->number = value;
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Precedence levels used by the printer.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

std::string number_text(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

void print(const Expr& e, std::string& out) {
  auto wrapped = [&](const Expr& child, bool parens) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::Number: out += number_text(e.number); return;
    case Expr::Kind::Ident: out += e.name; return;
    case Expr::Kind::Call:
      out += e.name;
      out += '(';
      print(*e.args[0], out);
      out += ')';
      return;
    case Expr::Kind::Neg:
      out += '-';
      wrapped(*e.args[0], precedence(*e.args[0]) < 3);
      return;
    case Expr::Kind::Pow:
      // left operand must be a base; right operand is a factor (pow or neg or base)
      wrapped(*e.args[0], precedence(*e.args[0]) <= 4);
      out += '^';
      wrapped(*e.args[1], precedence(*e.args[1]) < 3);
      return;
    default: break;
  }
  const int p = precedence(e);
  const char op = e.kind == Expr::Kind::Add   ? '+'
                  : e.kind == Expr::Kind::Sub ? '-'
                  : e.kind == Expr::Kind::Mul ? '*'
                                              : '/';
  wrapped(*e.args[0], precedence(*e.args[0]) < p);
  out += op;
  wrapped(*e.args[1], precedence(*e.args[1]) <= p);
}

void collect(const Expr& e, std::set<std::string>& names) {
  if (e.kind == Expr::Kind::Ident) names.insert(e.name);
  for (const auto& a : e.args) collect(*a, names);
}

// --- compiled form ----------------------------------------------------------

enum class Op { Const, Coord, Neg, Add, Sub, Mul, Div, PowConst, Pow, Sin, Cos, Tan, Sinh, Cosh, Exp, Ln, Sqrt, Abs };

struct Instr {
  Op op;
  double value = 0.0;
  int index = 0;
};

Op function_op(const std::string& name) {
  if (name == "sin") return Op::Sin;
  if (name == "cos") return Op::Cos;
  if (name == "tan") return Op::Tan;
  if (name == "sinh") return Op::Sinh;
  if (name == "cosh") return Op::Cosh;
  if (name == "exp") return Op::Exp;
  if (name == "ln") return Op::Ln;
  if (name == "sqrt") return Op::Sqrt;
  return Op::Abs;
}

template <class T>
T apply_unary(Op op, const T& a) {
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::sin;
  using std::sinh;
  switch (op) {
    case Op::Neg: return -a;
    case Op::Sin: return sin(a);
    case Op::Cos: return cos(a);
    case Op::Sinh: return sinh(a);
    case Op::Cosh: return cosh(a);
    case Op::Exp: return exp(a);
    default: break;
  }
  if constexpr (std::is_same_v<T, double>) {
    switch (op) {
      case Op::Tan: return checked_tan(a);
      case Op::Ln: return checked_log(a);
      case Op::Sqrt: return checked_sqrt(a);
      default: return std::fabs(a);
    }
  } else {
    switch (op) {
      case Op::Tan: return tan(a);
      case Op::Ln: return log(a);
      case Op::Sqrt: return sqrt(a);
      default: return abs(a);
    }
  }
}

double divide(double a, double b) {
  if (b == 0.0) throw domain_error("division by zero");
  return a / b;
}
Jet2 divide(const Jet2& a, const Jet2& b) { return a / b; }

double raise(double a, double b) { return checked_pow(a, b); }
Jet2 raise(const Jet2& a, const Jet2& b) { return pow(a, b); }
double raise_const(double a, double c) { return checked_pow(a, c); }
Jet2 raise_const(const Jet2& a, double c) { return pow(a, c); }

bool finite_value(double x) { return std::isfinite(x); }
bool finite_value(const Jet2& x) { return x.finite(); }

class CompiledField final : public ScalarField::Impl {
 public:
  CompiledField(int dim, std::vector<Instr> program, std::string text, bool constant)
      : dim_(dim), program_(std::move(program)), text_(std::move(text)), constant_(constant) {}

  double value(std::span<const double> x) const override { return run<double>(x); }
  Jet2 jet(std::span<const double> x) const override { return run<Jet2>(x); }
  bool is_constant() const override { return constant_; }
  std::string describe() const override { return text_; }

 private:
  template <class T>
  T run(std::span<const double> x) const {
    std::vector<T> stack;
    stack.reserve(8);
    for (const Instr& in : program_) {
      switch (in.op) {
        case Op::Const:
          if constexpr (std::is_same_v<T, double>) stack.push_back(in.value);
          else stack.push_back(Jet2::constant(dim_, in.value));
          break;
        case Op::Coord:
          if constexpr (std::is_same_v<T, double>) stack.push_back(x[in.index]);
          else stack.push_back(Jet2::variable(dim_, in.index, x[in.index]));
          break;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow: {
          T b = std::move(stack.back());
          stack.pop_back();
          T& a = stack.back();
          switch (in.op) {
            case Op::Add: a = a + b; break;
            case Op::Sub: a = a - b; break;
            case Op::Mul: a = a * b; break;
            case Op::Div: a = divide(a, b); break;
            default: a = raise(a, b); break;
          }
          break;
        }
        case Op::PowConst: stack.back() = raise_const(stack.back(), in.value); break;
        default: stack.back() = apply_unary(in.op, stack.back()); break;
      }
      if (!finite_value(stack.back()))
        throw numerical_error("non-finite intermediate while evaluating " + text_);
    }
    return stack.back();
  }

  int dim_;
  std::vector<Instr> program_;
  std::string text_;
  bool constant_;
};

class Compiler {
 public:
  Compiler(std::span<const std::string> coords, const ParamMap& params)
      : coords_(coords), params_(params) {}

  // Returns true when the subtree is constant; its value is in `folded`.
  bool compile(const Expr& e, std::vector<Instr>& out, double& folded) {
    switch (e.kind) {
      case Expr::Kind::Number:
        folded = e.number;
        out.push_back({Op::Const, e.number});
        return true;
      case Expr::Kind::Ident: {
        for (std::size_t i = 0; i < coords_.size(); ++i)
          if (coords_[i] == e.name) {
            out.push_back({Op::Coord, 0.0, static_cast<int>(i)});
            return false;
          }
        double v;
        if (auto it = params_.find(e.name); it != params_.end()) v = it->second;
        else if (e.name == "pi") v = std::numbers::pi;
        else
          throw invalid_argument("unbound identifier '" + e.name + "' at position " +
                                 std::to_string(e.pos));
        folded = v;
        out.push_back({Op::Const, v});
        return true;
      }
      default: break;
    }

    std::vector<Instr> code;
    std::vector<double> values(e.args.size());
    bool all_constant = true;
    std::vector<std::size_t> marks;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      marks.push_back(code.size());
      all_constant = compile(*e.args[i], code, values[i]) && all_constant;
    }
    Op op;
    switch (e.kind) {
      case Expr::Kind::Neg: op = Op::Neg; break;
      case Expr::Kind::Add: op = Op::Add; break;
      case Expr::Kind::Sub: op = Op::Sub; break;
      case Expr::Kind::Mul: op = Op::Mul; break;
      case Expr::Kind::Div: op = Op::Div; break;
      case Expr::Kind::Pow: op = Op::Pow; break;
      default: op = function_op(e.name); break;
    }

    if (all_constant) {
      double v;
      try {
        switch (op) {
          case Op::Add: v = values[0] + values[1]; break;
          case Op::Sub: v = values[0] - values[1]; break;
          case Op::Mul: v = values[0] * values[1]; break;
          case Op::Div: v = divide(values[0], values[1]); break;
          case Op::Pow: v = raise(values[0], values[1]); break;
          default: v = apply_unary(op, values[0]); break;
        }
      } catch (const Error& err) {
        throw Error(err.kind(), std::string(err.what()) + " in constant subexpression at position " +
                                    std::to_string(e.pos));
      }
      if (!std::isfinite(v))
        throw numerical_error("non-finite constant subexpression at position " +
                              std::to_string(e.pos));
      folded = v;
      out.push_back({Op::Const, v});
      return true;
    }

    if (op == Op::Pow && code[marks[1]].op == Op::Const && code.size() == marks[1] + 1) {
      // constant exponent
      code.pop_back();
      code.push_back({Op::PowConst, values[1]});
    } else {
      code.push_back({op});
    }
    out.insert(out.end(), code.begin(), code.end());
    return false;
  }

 private:
  std::span<const std::string> coords_;
  const ParamMap& params_;
};

}  // namespace

ExprPtr parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == Expr::Kind::Number && a.number != b.number) return false;
  if ((a.kind == Expr::Kind::Ident || a.kind == Expr::Kind::Call) && a.name != b.name) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

std::vector<std::string> identifiers(const Expr& e) {
  std::set<std::string> names;
  collect(e, names);
  return {names.begin(), names.end()};
}

ScalarField bind(const ExprPtr& expr, std::span<const std::string> coords,
                 const ParamMap& params) {
  if (!expr) throw invalid_argument("bind of an empty expression");
  const int dim = static_cast<int>(coords.size());
  if (dim > kMaxDim) throw invalid_argument("too many coordinates");
  std::vector<Instr> program;
  double folded = 0.0;
  const bool constant = Compiler(coords, params).compile(*expr, program, folded);
  if (constant) return ScalarField::constant(dim, folded);
  return ScalarField(dim, std::make_shared<CompiledField>(dim, std::move(program),
                                                          to_string(*expr), false));
}

Jet2 bind_and_eval(const ExprPtr& expr, const ParamMap& params,
                   std::span<const std::string> coords, std::span<const double> point) {
  return biharm::bind(expr, coords, params).jet(point);
}

ScalarField make_field(std::string_view text, std::span<const std::string> coords,
                       const ParamMap& params) {
  return biharm::bind(parse_expression(text), coords, params);
}

}  // namespace biharm
