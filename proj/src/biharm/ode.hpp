#pragma once

// Fixed-step RK4 and checks of the closed-form solution families of the
// foliation ODEs.

#include <functional>
#include <vector>

#include "biharm/jet.hpp"

namespace biharm {

using State = std::vector<double>;
using OdeRhs = std::function<State(double t, const State& y)>;

struct OdeProblem {
  OdeRhs rhs;
  State initial;
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 10000;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<State> y;
};

/// Classical fourth-order Runge-Kutta with `steps` equal steps. Throws a
/// numerical error naming the step index if a state becomes non-finite.
Trajectory rk4_integrate(const OdeProblem& problem);

inline constexpr int kDefaultOdeSteps = 10000;

// Residuals of the ODEs, evaluated with jets of a one-variable field.
/// f f'' - 2 f'^2
double conformal_ode_residual(const ScalarField& f, double z);
/// (f'/f)' - (f'/f)^2
double conformal_ode_residual_log_form(const ScalarField& f, double z);
/// p'' + 2 p'^2
double exponent_ode_residual(const ScalarField& p, double z);
/// p'' + 2 p'^2 + q'' + 2 q'^2
double doubly_warped_ode_residual(const ScalarField& p, const ScalarField& q, double z);
/// lambda lambda'' + lambda'^2
double sphere_warp_ode_residual(const ScalarField& lambda, double t);

/// Integrates f'' = 2 f'^2 / f from the data of f = D/(z+E) at the interval
/// start and returns max |numeric - closed form| over the trajectory.
double verify_conformal_family(double D, double E, double a, double b, int steps = kDefaultOdeSteps);

enum class WarpFamily {
  Exponent,  // p = ln(Az+B)/2 solving p'' + 2p'^2 = 0
  Sphere,    // lambda = sqrt(At+B) solving lambda lambda'' + lambda'^2 = 0
};

double verify_warp_family(WarpFamily family, double A, double B, double a, double b,
                          int steps = kDefaultOdeSteps);

/// log2(err(steps) / err(2 steps)) for one of the three families.
double measured_order(const std::function<double(int)>& deviation_for_steps, int steps);

}  // namespace biharm
