#pragma once

// Second-order forward-mode jets and the scalar fields evaluated with them.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "biharm/error.hpp"

namespace biharm {

/// Largest chart dimension supported by the fixed-capacity jet storage.
inline constexpr int kMaxDim = 8;

using Point = std::vector<double>;

/// Open interval; either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x > lo && x < hi; }
};

using Box = std::vector<Interval>;

/// Index of the first coordinate of `x` outside `box`, or -1.
int first_outside(const Box& box, std::span<const double> x);

std::string format_point(std::span<const double> x);

/// Value, gradient and Hessian of a scalar with respect to `dim()` coordinates.
/// The Hessian is stored packed, so it is symmetric by construction.
class Jet2 {
 public:
  Jet2() = default;

  static Jet2 constant(int n, double v);
  static Jet2 variable(int n, int i, double v);

  int dim() const { return n_; }
  double value() const { return v_; }
  double d(int i) const { return g_[i]; }
  double d2(int i, int j) const { return h_[packed(i, j)]; }

  std::vector<double> gradient() const;
  /// Row-major dim x dim Hessian.
  std::vector<double> hessian() const;

  bool finite() const;

  Jet2 operator-() const;
  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
  Jet2& operator+=(double c) { v_ += c; return *this; }
  Jet2& operator-=(double c) { v_ -= c; return *this; }
  Jet2& operator*=(double c);
  Jet2& operator/=(double c);

  /// f(a) given f, f', f'' at a.value().
  static Jet2 chain(const Jet2& a, double f0, double f1, double f2);

 private:
  static constexpr int packed(int i, int j) {
    return i <= j ? j * (j + 1) / 2 + i : i * (i + 1) / 2 + j;
  }
  static constexpr int kPacked = kMaxDim * (kMaxDim + 1) / 2;

  int n_ = 0;
  double v_ = 0.0;
  std::array<double, kMaxDim> g_{};
  std::array<double, kPacked> h_{};

  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
};

inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
inline Jet2 operator+(Jet2 a, double c) { return a += c; }
inline Jet2 operator+(double c, Jet2 a) { return a += c; }
inline Jet2 operator-(Jet2 a, double c) { return a -= c; }
inline Jet2 operator-(double c, const Jet2& a) { return -a + c; }
inline Jet2 operator*(Jet2 a, double c) { return a *= c; }
inline Jet2 operator*(double c, Jet2 a) { return a *= c; }
inline Jet2 operator/(Jet2 a, double c) { return a /= c; }
Jet2 operator/(double c, const Jet2& a);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 abs(const Jet2& a);
/// a^k by repeated multiplication (k < 0 takes the reciprocal).
Jet2 pow_int(const Jet2& a, long k);
Jet2 pow(const Jet2& a, double c);
Jet2 pow(const Jet2& a, const Jet2& b);

// Plain-double counterparts with the same domain checks, so generic code
// (templated on the scalar type) reports errors identically in both modes.
double checked_log(double x);
double checked_sqrt(double x);
double checked_tan(double x);
double pow_int(double a, long k);
double checked_pow(double a, double c);

/// A real function of the chart coordinates that can be evaluated both on
/// doubles and in Jet2 arithmetic. Immutable and cheap to copy.
class ScalarField {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual double value(std::span<const double> x) const = 0;
    virtual Jet2 jet(std::span<const double> x) const = 0;
    virtual bool is_constant() const { return false; }
    virtual std::string describe() const { return "<field>"; }
  };

  ScalarField() = default;
  ScalarField(int dim, std::shared_ptr<const Impl> impl) : dim_(dim), impl_(std::move(impl)) {}

  static ScalarField constant(int dim, double c);

  /// Wrap a generic callable `f(std::span<const T>) -> T`, used with T = double
  /// and T = Jet2.
  template <class F>
  static ScalarField from_generic(int dim, F f, std::string description = "<generic>");

  int dim() const { return dim_; }
  bool valid() const { return impl_ != nullptr; }
  bool is_constant() const { return impl_ && impl_->is_constant(); }
  /// True when the field is the constant zero.
  bool is_zero() const;
  std::string describe() const { return impl_ ? impl_->describe() : "<empty>"; }

  /// Plain evaluation; throws on domain violations and non-finite results.
  double operator()(std::span<const double> x) const;
  Jet2 jet(std::span<const double> x) const;

 private:
  void check_arity(std::span<const double> x) const;

  int dim_ = 0;
  std::shared_ptr<const Impl> impl_;
};

/// Exact value, gradient and Hessian of `field` at `x`.
Jet2 jet2_eval(const ScalarField& field, std::span<const double> x);

inline constexpr double kDefaultFdStep = 1e-4;

/// Central-difference gradient. When `domain` is given, stencil points must lie
/// inside it.
std::vector<double> fd_gradient(const ScalarField& field, std::span<const double> x,
                                double step = kDefaultFdStep, const Box* domain = nullptr);

/// Central second-difference Hessian, row-major n x n, exactly symmetric.
std::vector<double> fd_hessian(const ScalarField& field, std::span<const double> x,
                               double step = kDefaultFdStep, const Box* domain = nullptr);

// ---------------------------------------------------------------------------

namespace detail {

template <class F>
class GenericField final : public ScalarField::Impl {
 public:
  GenericField(int dim, F f, std::string description)
      : dim_(dim), f_(std::move(f)), description_(std::move(description)) {}

  double value(std::span<const double> x) const override { return f_(x); }

  Jet2 jet(std::span<const double> x) const override {
    std::array<Jet2, kMaxDim> vars;
    for (int i = 0; i < dim_; ++i) vars[i] = Jet2::variable(dim_, i, x[i]);
    return f_(std::span<const Jet2>(vars.data(), dim_));
  }

  std::string describe() const override { return description_; }

 private:
  int dim_;
  F f_;
  std::string description_;
};

}  // namespace detail

template <class F>
ScalarField ScalarField::from_generic(int dim, F f, std::string description) {
  if (dim < 0 || dim > kMaxDim) throw invalid_argument("field dimension out of range");
  return ScalarField(dim, std::make_shared<detail::GenericField<F>>(dim, std::move(f),
                                                                    std::move(description)));
}

}  // namespace biharm
