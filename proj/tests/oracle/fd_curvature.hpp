#pragma once

// Curvature from plain metric evaluations and fourth-order finite differences.
// Shares no derivative code with the jet pipeline; used only by tests.

#include <vector>

#include "biharm/chart.hpp"

namespace oracle {

struct FdCurvature {
  int n = 0;
  std::vector<double> gamma;    // [c][a][b]
  std::vector<double> riemann;  // lowered <R(d_a, d_b) d_c, d_d>, [a][b][c][d]
  std::vector<double> ricci;    // [a][b]
  double scalar = 0.0;

  double G(int c, int a, int b) const { return gamma[(c * n + a) * n + b]; }
  double R(int a, int b, int c, int d) const { return riemann[((a * n + b) * n + c) * n + d]; }
  double Ric(int a, int b) const { return ricci[a * n + b]; }
};

inline constexpr double kOracleStep = 1e-2;

FdCurvature fd_curvature(const biharm::MetricChart& chart, const std::vector<double>& p,
                         double step = kOracleStep);

}  // namespace oracle
