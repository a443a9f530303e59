#include "biharm/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace biharm {

namespace {

State axpy(const State& y, double h, const State& k) {
  State out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

bool all_finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

struct Derivs {
  double v, d1, d2;
};

Derivs derivs(const ScalarField& f, double x) {
  if (f.dim() != 1) throw invalid_argument("ODE residuals need a one-variable field");
  const Jet2 j = f.jet(std::vector<double>{x});
  return {j.value(), j.d(0), j.d2(0, 0)};
}

void require_interval(double a, double b, int steps) {
  if (!(a < b)) throw invalid_argument("interval must satisfy a < b");
  if (steps < 2) throw invalid_argument("step count must be at least 2");
}

double max_deviation(const Trajectory& tr, const std::function<double(double)>& exact) {
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.t.size(); ++k)
    worst = std::max(worst, std::abs(tr.y[k][0] - exact(tr.t[k])));
  return worst;
}

}  // namespace

Trajectory rk4_integrate(const OdeProblem& pr) {
  require_interval(pr.t0, pr.t1, pr.steps);
  if (!pr.rhs) throw invalid_argument("ODE problem has no right-hand side");
  if (!all_finite(pr.initial)) throw numerical_error("non-finite initial state");
  const double h = (pr.t1 - pr.t0) / pr.steps;
  Trajectory tr;
  tr.t.reserve(static_cast<std::size_t>(pr.steps) + 1);
  tr.y.reserve(static_cast<std::size_t>(pr.steps) + 1);
  tr.t.push_back(pr.t0);
  tr.y.push_back(pr.initial);
  State y = pr.initial;
  for (int k = 0; k < pr.steps; ++k) {
    const double t = pr.t0 + k * h;
    const State k1 = pr.rhs(t, y);
    const State k2 = pr.rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = pr.rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = pr.rhs(t + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(y)) throw numerical_error("non-finite state at step " + std::to_string(k + 1));
    tr.t.push_back(pr.t0 + (k + 1) * h);
    tr.y.push_back(y);
  }
  return tr;
}

double conformal_ode_residual(const ScalarField& f, double z) {
  const Derivs d = derivs(f, z);
  return d.v * d.d2 - 2.0 * d.d1 * d.d1;
}

double conformal_ode_residual_log_form(const ScalarField& f, double z) {
  const Derivs d = derivs(f, z);
  if (d.v == 0.0) throw domain_error("log form needs f != 0");
  const double u = d.d1 / d.v;
  const double du = d.d2 / d.v - u * u;
  return du - u * u;
}

double exponent_ode_residual(const ScalarField& p, double z) {
  const Derivs d = derivs(p, z);
  return d.d2 + 2.0 * d.d1 * d.d1;
}

double doubly_warped_ode_residual(const ScalarField& p, const ScalarField& q, double z) {
  return exponent_ode_residual(p, z) + exponent_ode_residual(q, z);
}

double sphere_warp_ode_residual(const ScalarField& lambda, double t) {
  const Derivs d = derivs(lambda, t);
  return d.v * d.d2 + d.d1 * d.d1;
}

double verify_conformal_family(double D, double E, double a, double b, int steps) {
  require_interval(a, b, steps);
  if (D == 0.0) throw constraint_error("conformal family needs D != 0");
  if (a + E <= 0.0 && b + E >= 0.0)
    throw domain_error("interval contains the singularity z = -E");
  auto exact = [=](double z) { return D / (z + E); };
  OdeProblem pr;
  pr.rhs = [](double, const State& y) -> State {
    if (y[0] == 0.0) throw numerical_error("f vanished during integration");
    return {y[1], 2.0 * y[1] * y[1] / y[0]};
  };
  pr.initial = {exact(a), -D / ((a + E) * (a + E))};
  pr.t0 = a;
  pr.t1 = b;
  pr.steps = steps;
  return max_deviation(rk4_integrate(pr), exact);
}

double verify_warp_family(WarpFamily family, double A, double B, double a, double b, int steps) {
  require_interval(a, b, steps);
  if (!(A * a + B > 0.0) || !(A * b + B > 0.0))
    throw domain_error("A*z + B must stay positive on the interval");
  OdeProblem pr;
  pr.t0 = a;
  pr.t1 = b;
  pr.steps = steps;
  std::function<double(double)> exact;
  if (family == WarpFamily::Exponent) {
    exact = [=](double z) { return 0.5 * std::log(A * z + B); };
    pr.rhs = [](double, const State& y) -> State { return {y[1], -2.0 * y[1] * y[1]}; };
    pr.initial = {exact(a), 0.5 * A / (A * a + B)};
  } else {
    exact = [=](double t) { return std::sqrt(A * t + B); };
    pr.rhs = [](double, const State& y) -> State {
      if (y[0] == 0.0) throw numerical_error("lambda vanished during integration");
      return {y[1], -y[1] * y[1] / y[0]};
    };
    pr.initial = {exact(a), 0.5 * A / std::sqrt(A * a + B)};
  }
  return max_deviation(rk4_integrate(pr), exact);
}

double measured_order(const std::function<double(int)>& deviation_for_steps, int steps) {
  const double coarse = deviation_for_steps(steps);
  const double fine = deviation_for_steps(2 * steps);
  if (!(fine > 0.0)) throw numerical_error("fine-grid error vanished; order undefined");
  return std::log2(coarse / fine);
}

}  // namespace biharm
