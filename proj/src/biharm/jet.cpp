#include "biharm/jet.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace biharm {

int first_outside(const Box& box, std::span<const double> x) {
  const std::size_t n = std::min(box.size(), x.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!box[i].contains(x[i])) return static_cast<int>(i);
  }
  return -1;
}

std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

// --- Jet2 -----------------------------------------------------------------

Jet2 Jet2::constant(int n, double v) {
  if (n < 0 || n > kMaxDim) throw invalid_argument("jet dimension out of range");
  Jet2 j;
  j.n_ = n;
  j.v_ = v;
  return j;
}

Jet2 Jet2::variable(int n, int i, double v) {
  Jet2 j = constant(n, v);
  if (i < 0 || i >= n) throw invalid_argument("jet variable index out of range");
  j.g_[i] = 1.0;
  return j;
}

std::vector<double> Jet2::gradient() const { return {g_.begin(), g_.begin() + n_}; }

std::vector<double> Jet2::hessian() const {
  std::vector<double> out(static_cast<std::size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i * n_ + j] = h_[packed(i, j)];
  return out;
}

bool Jet2::finite() const {
  if (!std::isfinite(v_)) return false;
  for (int i = 0; i < n_; ++i)
    if (!std::isfinite(g_[i])) return false;
  const int np = n_ * (n_ + 1) / 2;
  for (int k = 0; k < np; ++k)
    if (!std::isfinite(h_[k])) return false;
  return true;
}

Jet2 Jet2::operator-() const {
  Jet2 r = *this;
  r.v_ = -v_;
  for (auto& x : r.g_) x = -x;
  for (auto& x : r.h_) x = -x;
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  n_ = std::max(n_, o.n_);
  v_ += o.v_;
  for (int i = 0; i < kMaxDim; ++i) g_[i] += o.g_[i];
  for (int k = 0; k < kPacked; ++k) h_[k] += o.h_[k];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  n_ = std::max(n_, o.n_);
  v_ -= o.v_;
  for (int i = 0; i < kMaxDim; ++i) g_[i] -= o.g_[i];
  for (int k = 0; k < kPacked; ++k) h_[k] -= o.h_[k];
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) { return *this = *this * o; }
Jet2& Jet2::operator/=(const Jet2& o) { return *this = *this / o; }

Jet2& Jet2::operator*=(double c) {
  v_ *= c;
  for (auto& x : g_) x *= c;
  for (auto& x : h_) x *= c;
  return *this;
}

Jet2& Jet2::operator/=(double c) {
  v_ /= c;
  for (auto& x : g_) x /= c;
  for (auto& x : h_) x /= c;
  return *this;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.n_ = std::max(a.n_, b.n_);
  r.v_ = a.v_ * b.v_;
  for (int i = 0; i < r.n_; ++i) r.g_[i] = a.v_ * b.g_[i] + b.v_ * a.g_[i];
  for (int j = 0; j < r.n_; ++j)
    for (int i = 0; i <= j; ++i) {
      const int k = Jet2::packed(i, j);
      r.h_[k] = a.v_ * b.h_[k] + b.v_ * a.h_[k] + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
    }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  if (b.v_ == 0.0) throw domain_error("division by zero");
  // q = a / b, differentiated from a = q * b.
  Jet2 q;
  q.n_ = std::max(a.n_, b.n_);
  q.v_ = a.v_ / b.v_;
  for (int i = 0; i < q.n_; ++i) q.g_[i] = (a.g_[i] - q.v_ * b.g_[i]) / b.v_;
  for (int j = 0; j < q.n_; ++j)
    for (int i = 0; i <= j; ++i) {
      const int k = Jet2::packed(i, j);
      q.h_[k] = (a.h_[k] - q.v_ * b.h_[k] - q.g_[i] * b.g_[j] - q.g_[j] * b.g_[i]) / b.v_;
    }
  return q;
}

Jet2 operator/(double c, const Jet2& a) { return Jet2::constant(a.dim(), c) / a; }

Jet2 Jet2::chain(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r;
  r.n_ = a.n_;
  r.v_ = f0;
  for (int i = 0; i < a.n_; ++i) r.g_[i] = f1 * a.g_[i];
  for (int j = 0; j < a.n_; ++j)
    for (int i = 0; i <= j; ++i) {
      const int k = packed(i, j);
      r.h_[k] = f1 * a.h_[k] + f2 * a.g_[i] * a.g_[j];
    }
  return r;
}

namespace {

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

}  // namespace

double checked_log(double x) {
  if (!(x > 0.0)) throw domain_error("ln of non-positive argument " + num(x));
  return std::log(x);
}

double checked_sqrt(double x) {
  if (!(x >= 0.0)) throw domain_error("sqrt of negative argument " + num(x));
  return std::sqrt(x);
}

double checked_tan(double x) {
  if (std::cos(x) == 0.0) throw domain_error("tan pole at " + num(x));
  return std::tan(x);
}

double pow_int(double a, long k) {
  if (k < 0) {
    if (a == 0.0) throw domain_error("zero raised to negative power");
    return 1.0 / pow_int(a, -k);
  }
  double r = 1.0;
  double base = a;
  while (k > 0) {
    if (k & 1) r *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return r;
}

double checked_pow(double a, double c) {
  if (c == std::trunc(c) && std::fabs(c) < 1e9) return pow_int(a, static_cast<long>(c));
  if (!(a > 0.0)) throw domain_error("non-integer power of non-positive base " + num(a));
  return std::exp(c * std::log(a));
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet2::chain(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet2::chain(a, c, -s, -c);
}

Jet2 tan(const Jet2& a) {
  const double t = checked_tan(a.value());
  const double sec2 = 1.0 + t * t;
  return Jet2::chain(a, t, sec2, 2.0 * t * sec2);
}

Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return Jet2::chain(a, s, c, s);
}

Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return Jet2::chain(a, c, s, c);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return Jet2::chain(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  const double x = a.value();
  const double l = checked_log(x);
  return Jet2::chain(a, l, 1.0 / x, -1.0 / (x * x));
}

Jet2 sqrt(const Jet2& a) {
  const double x = a.value();
  const double s = checked_sqrt(x);
  if (s == 0.0) {
    for (int i = 0; i < a.dim(); ++i)
      if (a.d(i) != 0.0) throw domain_error("sqrt is not differentiable at 0");
    return Jet2::constant(a.dim(), 0.0);
  }
  return Jet2::chain(a, s, 0.5 / s, -0.25 / (s * x));
}

Jet2 abs(const Jet2& a) {
  const double x = a.value();
  if (x == 0.0) {
    for (int i = 0; i < a.dim(); ++i)
      if (a.d(i) != 0.0) throw domain_error("abs is not differentiable at 0");
    return Jet2::constant(a.dim(), 0.0);
  }
  return x > 0 ? a : -a;
}

Jet2 pow_int(const Jet2& a, long k) {
  if (k < 0) {
    if (a.value() == 0.0) throw domain_error("zero raised to negative power");
    return 1.0 / pow_int(a, -k);
  }
  Jet2 r = Jet2::constant(a.dim(), 1.0);
  Jet2 base = a;
  while (k > 0) {
    if (k & 1) r *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return r;
}

Jet2 pow(const Jet2& a, double c) {
  if (c == std::trunc(c) && std::fabs(c) < 1e9) return pow_int(a, static_cast<long>(c));
  const double x = a.value();
  const double p = checked_pow(x, c);
  return Jet2::chain(a, p, c * p / x, c * (c - 1.0) * p / (x * x));
}

Jet2 pow(const Jet2& a, const Jet2& b) {
  bool constant_exponent = true;
  for (int i = 0; i < b.dim(); ++i)
    if (b.d(i) != 0.0) constant_exponent = false;
  if (constant_exponent) return pow(a, b.value());
  if (!(a.value() > 0.0))
    throw domain_error("variable power of non-positive base " + num(a.value()));
  return exp(b * log(a));
}

// --- ScalarField ----------------------------------------------------------

namespace {

class ConstantField final : public ScalarField::Impl {
 public:
  ConstantField(int dim, double c) : dim_(dim), c_(c) {}
  double value(std::span<const double>) const override { return c_; }
  Jet2 jet(std::span<const double>) const override { return Jet2::constant(dim_, c_); }
  bool is_constant() const override { return true; }
  std::string describe() const override { return num(c_); }

 private:
  int dim_;
  double c_;
};

}  // namespace

ScalarField ScalarField::constant(int dim, double c) {
  if (dim < 0 || dim > kMaxDim) throw invalid_argument("field dimension out of range");
  return ScalarField(dim, std::make_shared<ConstantField>(dim, c));
}

bool ScalarField::is_zero() const {
  if (!is_constant()) return false;
  std::array<double, kMaxDim> origin{};
  return impl_->value(std::span<const double>(origin.data(), dim_)) == 0.0;
}

void ScalarField::check_arity(std::span<const double> x) const {
  if (!impl_) throw invalid_argument("evaluation of an empty field");
  if (static_cast<int>(x.size()) != dim_)
    throw invalid_argument("field expects " + std::to_string(dim_) + " coordinates, got " +
                           std::to_string(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw invalid_argument("non-finite coordinate " + std::to_string(i) + " in " +
                             format_point(x));
}

double ScalarField::operator()(std::span<const double> x) const {
  check_arity(x);
  double v;
  try {
    v = impl_->value(x);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(e.what()) + " at " + format_point(x));
  }
  if (!std::isfinite(v))
    throw numerical_error("non-finite value of " + describe() + " at " + format_point(x));
  return v;
}

Jet2 ScalarField::jet(std::span<const double> x) const {
  check_arity(x);
  Jet2 j;
  try {
    j = impl_->jet(x);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(e.what()) + " at " + format_point(x));
  }
  if (!j.finite())
    throw numerical_error("non-finite jet of " + describe() + " at " + format_point(x));
  if (j.dim() < dim_) {
    // constants produced by generic callables carry no derivative slots
    Jet2 widened = Jet2::constant(dim_, 0.0);
    widened += j;
    return widened;
  }
  return j;
}

Jet2 jet2_eval(const ScalarField& field, std::span<const double> x) { return field.jet(x); }

// --- finite differences ---------------------------------------------------

namespace {

double eval_stencil(const ScalarField& field, std::vector<double>& y, const Box* domain,
                    int coord) {
  if (domain) {
    const int bad = first_outside(*domain, y);
    if (bad >= 0)
      throw domain_error("finite-difference stencil along coordinate " + std::to_string(coord) +
                         " leaves the domain (coordinate " + std::to_string(bad) + " = " +
                         num(y[bad]) + ")");
  }
  try {
    return field(y);
  } catch (const Error& e) {
    throw Error(e.kind(), "finite-difference stencil along coordinate " + std::to_string(coord) +
                              ": " + e.what());
  }
}

void check_step(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw invalid_argument("step must be positive");
}

}  // namespace

std::vector<double> fd_gradient(const ScalarField& field, std::span<const double> x, double step,
                                const Box* domain) {
  check_step(step);
  const std::size_t n = x.size();
  std::vector<double> y(x.begin(), x.end());
  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = x[i] + step;
    const double fp = eval_stencil(field, y, domain, static_cast<int>(i));
    y[i] = x[i] - step;
    const double fm = eval_stencil(field, y, domain, static_cast<int>(i));
    y[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * step);
  }
  return grad;
}

std::vector<double> fd_hessian(const ScalarField& field, std::span<const double> x, double step,
                               const Box* domain) {
  check_step(step);
  const std::size_t n = x.size();
  std::vector<double> y(x.begin(), x.end());
  std::vector<double> hess(n * n);
  const double f0 = eval_stencil(field, y, domain, 0);
  const double h2 = step * step;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = x[i] + step;
    const double fp = eval_stencil(field, y, domain, static_cast<int>(i));
    y[i] = x[i] - step;
    const double fm = eval_stencil(field, y, domain, static_cast<int>(i));
    y[i] = x[i];
    hess[i * n + i] = (fp - 2.0 * f0 + fm) / h2;
    for (std::size_t j = 0; j < i; ++j) {
      double acc = 0.0;
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          y[i] = x[i] + si * step;
          y[j] = x[j] + sj * step;
          acc += si * sj * eval_stencil(field, y, domain, static_cast<int>(i));
        }
      y[i] = x[i];
      y[j] = x[j];
      hess[i * n + j] = hess[j * n + i] = acc / (4.0 * h2);
    }
  }
  return hess;
}

}  // namespace biharm
