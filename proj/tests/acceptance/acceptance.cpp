// Acceptance runner. With no arguments every criterion runs; otherwise only the
// listed numbers. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "biharm/biharmonic.hpp"
#include "biharm/curvature.hpp"
#include "biharm/families.hpp"
#include "biharm/hopf.hpp"
#include "biharm/ode.hpp"
#include "fd_curvature.hpp"
#include "test_support.hpp"

using namespace biharm;
using testsupport::spec;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed requirement; the first three are kept for the report line.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_ < 3) failed_ << (failures_ ? "; " : "") << what;
    ++failures_;
    pass = false;
  }

  std::string line() const {
    std::string s = detail.str();
    if (failures_) s += " | " + std::to_string(failures_) + " failed: " + failed_.str();
    return s;
  }

 private:
  int failures_ = 0;
  std::ostringstream failed_;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

SliceLeaf leaf_of(const FamilySpec& s, int slice, double value) { return SliceLeaf(build_family(s), slice, value); }

std::vector<double> steps_from(double lo, double hi, double step) {
  std::vector<double> out;
  for (int k = 0; lo + k * step <= hi + 1e-12; ++k) out.push_back(lo + k * step);
  return out;
}

// Raw tangential residual norm, max over the grid.
double max_raw_tangential(const ResidualReport& r) {
  return *std::max_element(r.tangential_norm.begin(), r.tangential_norm.end());
}

struct ConformalDraw {
  double D, E;
  int m;
};

std::vector<ConformalDraw> conformal_draws() {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> ud(0.2, 3.0), ue(0.0, 2.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<ConformalDraw> out;
  for (int k = 0; k < 20; ++k) {
    const double D = sign(rng) ? ud(rng) : -ud(rng);
    out.push_back({D, ue(rng), 2 + k % 3});
  }
  return out;
}

// 1: conformally flat family f = D/(z+E).
void c1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_n = 0, worst_t = 0, worst_h = 0;
  int leaves = 0;
  for (const auto& d : conformal_draws()) {
    const MetricChart chart = build_family(spec("conformal_flat", {{"m", d.m}, {"D", d.D}, {"E", d.E}}));
    for (double off : steps_from(0.5, 3.0, 0.5)) {
      const double z = -d.E + off;
      const SliceLeaf leaf(chart, d.m, z);
      const ResidualReport r = classify(leaf, leaf_grid(leaf, 2));
      const double h = std::abs(d.D) / (off * off);
      double dh = 0;
      for (double H : r.H) dh = std::max(dh, std::abs(std::abs(H) - h));
      worst_n = std::max(worst_n, r.max_normal);
      worst_t = std::max(worst_t, max_raw_tangential(r));
      worst_h = std::max(worst_h, dh);
      o.require(r.classification == Classification::ProperBiharmonic,
                "D=" + fmt(d.D) + " E=" + fmt(d.E) + " z=" + fmt(z) + " is " + to_string(r.classification));
      ++leaves;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(worst_n < 1e-6, "normal residual " + fmt(worst_n));
  o.require(worst_t < 1e-6, "tangential residual " + fmt(worst_t));
  o.require(worst_h < 1e-8, "|H| mismatch " + fmt(worst_h));
  o.require(secs < 10, "runtime " + fmt(secs) + " s");
  o.detail << leaves << " leaves, max normal " << fmt(worst_n) << ", max tangential " << fmt(worst_t)
           << ", max |H| error " << fmt(worst_h) << ", " << fmt(secs) << " s";
}

// 2: other exponents of (z+E) must be detected.
void c2(Outcome& o) {
  double least = INFINITY, closed = 0;
  int leaves = 0, nonbih = 0;
  for (const auto& d : conformal_draws())
    for (double s : {0.5, 1.5, 2.0}) {
      FamilySpec fs = spec("conformal_flat", {{"m", d.m}, {"D", d.D}, {"E", d.E}, {"s", s}});
      fs.exprs["f"] = "D/(z+E)^s";
      const MetricChart chart = build_family(fs);
      for (double off : steps_from(0.5, 3.0, 0.5)) {
        const SliceLeaf leaf(chart, d.m, -d.E + off);
        const ResidualReport r = classify(leaf, leaf_grid(leaf, 2));
        least = std::min(least, r.max_normal);
        // closed form: m s^2 (1-s) |D|^3 w^(-3s-3) over 1 + m s^3 |D|^3 w^(-3s-3)
        const double k = d.m * std::pow(std::abs(d.D), 3) * std::pow(off, -3 * s - 3);
        const double expect = k * s * s * std::abs(1 - s) / (1 + k * s * s * s);
        closed = std::max(closed, std::abs(r.max_normal - expect) / expect);
        nonbih += r.classification == Classification::NonBiharmonic;
        o.require(r.max_normal > 1e-3 && r.classification == Classification::NonBiharmonic,
                  "s=" + fmt(s) + " D=" + fmt(d.D) + " z+E=" + fmt(off) + " residual " + fmt(r.max_normal));
        ++leaves;
      }
    }
  o.require(closed < 1e-8, "closed-form mismatch " + fmt(closed));
  o.detail << leaves << " leaves, " << nonbih << " NonBiharmonic, smallest normalised normal residual " << fmt(least)
           << ", max relative gap to the closed form " << fmt(closed);
}

// 3: doubly warped plane with p = ln(Az+B)/2, q = ln(Cz+D)/2.
void c3(Outcome& o) {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  double worst_n = 0, worst_t = 0, worst_h = 0, rmin = INFINITY, rmax = -INFINITY;
  for (int k = 0; k < 20; ++k) {
    const double A = u(rng), B = u(rng), C = u(rng), D = u(rng);
    const MetricChart chart = build_family(spec("doubly_warped_plane", {{"A", A}, {"B", B}, {"C", C}, {"D", D}}));
    for (double z : steps_from(0.0, 3.0, 0.5)) {
      const SliceLeaf leaf(chart, 2, z);
      const ResidualReport r = classify(leaf, leaf_grid(leaf, 2));
      worst_n = std::max(worst_n, r.max_normal);
      worst_t = std::max(worst_t, max_raw_tangential(r));
      const double quoted = -(2 * A * C * z + A * D + B * C) / (2 * (A * z + B) * (C * z + D));
      for (double H : r.H) {
        worst_h = std::max(worst_h, std::abs(H - quoted));
        rmin = std::min(rmin, H / quoted);
        rmax = std::max(rmax, H / quoted);
      }
    }
  }
  o.require(worst_n < 1e-6, "normal residual " + fmt(worst_n));
  o.require(worst_t < 1e-6, "tangential residual " + fmt(worst_t));
  o.require(worst_h < 1e-8, "H differs from -(2ACz+AD+BC)/(2(Az+B)(Cz+D)) by up to " + fmt(worst_h));
  o.detail << "140 leaves, max normal " << fmt(worst_n) << ", max tangential " << fmt(worst_t)
           << ", H / quoted in [" << fmt(rmin) << ", " << fmt(rmax) << "]";
  if (!o.pass)
    o.detail << " (the quoted expression is -(p'+q'); with H = trace(A)/m the mean curvature is -(p'+q')/2)";
}

// 4: warped sphere over lambda = sqrt(At+B).
void c4(Outcome& o) {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  double worst_n = 0, worst_t = 0, worst_u = 0, least_ctl = INFINITY;
  for (int k = 0; k < 10; ++k) {
    const double A = u(rng), B = u(rng);
    const MetricChart chart = build_family(spec("warped_sphere", {{"A", A}, {"B", B}}));
    for (double t : steps_from(0.5, 3.0, 0.5)) {
      const SliceLeaf leaf(chart, 2, t);
      const auto grid = leaf_grid(leaf, 3);
      const ResidualReport r = classify(leaf, grid);
      worst_n = std::max(worst_n, r.max_normal);
      worst_t = std::max(worst_t, r.max_tangential);
      worst_u = std::max(worst_u, umbilicity_deviation(leaf, grid));
    }
  }
  FamilySpec ctl = spec("warped_sphere");
  ctl.exprs["lambda"] = "t+1";
  const MetricChart control = build_family(ctl);
  for (double t : steps_from(0.5, 3.0, 0.5)) {
    const SliceLeaf leaf(control, 2, t);
    least_ctl = std::min(least_ctl, classify(leaf, leaf_grid(leaf, 3)).max_normal);
  }
  o.require(worst_n < 1e-6, "normal residual " + fmt(worst_n));
  o.require(worst_t < 1e-6, "tangential residual " + fmt(worst_t));
  o.require(worst_u < 1e-8, "umbilicity " + fmt(worst_u));
  o.require(least_ctl > 1e-3, "control residual " + fmt(least_ctl));
  o.detail << "60 leaves, max normal " << fmt(worst_n) << ", max tangential " << fmt(worst_t) << ", umbilicity "
           << fmt(worst_u) << "; control lambda=t+1 min residual " << fmt(least_ctl);
}

// 5: small spheres in S^{n+1} and Clifford hypersurfaces.
void c5(Outcome& o) {
  int proper = 0, minimal = 0, other = 0;
  for (int n : {2, 3}) {
    const MetricChart chart = build_family(spec("sphere_polar", {{"n", n}}));
    for (int k = 1; k < 24; ++k) {
      const double rho = k * kPi / 24;
      const SliceLeaf leaf(chart, 0, rho);
      const ResidualReport r = classify(leaf, leaf_grid(leaf, 2));
      // rho = 3pi/4 is the same sphere S^n(1/sqrt 2) seen from the antipode
      Classification want = Classification::NonBiharmonic;
      if (k == 6 || k == 18) want = Classification::ProperBiharmonic;
      if (k == 12) want = Classification::Minimal;
      o.require(r.classification == want, "n=" + std::to_string(n) + " rho=" + std::to_string(k) + "pi/24 is " +
                                               to_string(r.classification));
      if (want == Classification::ProperBiharmonic) o.require(r.max_normal < 1e-6, "residual " + fmt(r.max_normal));
      (want == Classification::ProperBiharmonic ? proper : want == Classification::Minimal ? minimal : other)++;
    }
  }
  const SliceLeaf c12 = leaf_of(spec("clifford_chart", {{"p", 1}, {"q", 2}}), 0, kPi / 4);
  const SliceLeaf c11 = leaf_of(spec("clifford_chart", {{"p", 1}, {"q", 1}}), 0, kPi / 4);
  const Classification k12 = classify(c12, leaf_grid(c12, 2)).classification;
  const Classification k11 = classify(c11, leaf_grid(c11, 2)).classification;
  o.require(k12 == Classification::ProperBiharmonic, "Clifford (1,2) is " + to_string(k12));
  o.require(k11 == Classification::Minimal, "Clifford (1,1) is " + to_string(k11));
  o.detail << "rho = k pi/24, k=1..23, n=2,3: " << proper << " proper, " << minimal << " minimal, " << other
           << " non-biharmonic as expected; Clifford (1,2) " << to_string(k12) << ", (1,1) " << to_string(k11);
}

// 6: no proper biharmonic umbilical leaf when r <= 0.
void c6(Outcome& o) {
  int umbilical = 0;
  auto scan = [&](const MetricChart& chart, int slice, const std::vector<double>& values) {
    for (double v : values) {
      const SliceLeaf leaf(chart, slice, v);
      const auto grid = leaf_grid(leaf, 2);
      if (umbilicity_deviation(leaf, grid) >= 1e-8) continue;
      ++umbilical;
      const Classification c = classify(leaf, grid).classification;
      o.require(c != Classification::ProperBiharmonic, chart.name() + " leaf " + fmt(v) + " is ProperBiharmonic");
    }
  };
  for (int n : {2, 3}) scan(build_family(spec("hyperbolic_polar", {{"n", n}})), 0, steps_from(0.25, 3.0, 0.25));
  const MetricChart flat = build_family(spec("euclidean"));
  for (int s = 0; s < 3; ++s) scan(flat, s, steps_from(-1.0, 1.0, 0.25));
  scan(build_family(spec("euclidean_polar", {{"n", 2}})), 0, steps_from(0.25, 3.0, 0.25));
  o.require(umbilical > 0, "no umbilical leaf found");

  for (double r : {0.0, -1.0, -6.0, -12.0})
    for (int m : {2, 3}) o.require(umbilical_einstein_analysis(r, m) == std::vector<double>{0.0}, "r=" + fmt(r));
  const auto s = umbilical_einstein_analysis(6.0, 2);
  o.require(s.size() == 3 && std::abs(s[0] + 1) < 1e-15 && s[1] == 0.0 && std::abs(s[2] - 1) < 1e-15,
            "unit sphere analysis");
  o.detail << umbilical << " umbilical leaves, none proper; analysis {0} for r<=0, {-1,0,1} for r=6, m=2";
}

struct OracleGap {
  double jet_vs_fd = 0;
  double symmetry = 0;
};

OracleGap oracle_gap(const MetricChart& chart, const Point& p) {
  const CurvatureData c = curvature_at(chart, p);
  const oracle::FdCurvature f = oracle::fd_curvature(chart, p);
  const int n = chart.dim();
  const Riemann& R = c.riemann;
  OracleGap g;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      g.jet_vs_fd = std::max(g.jet_vs_fd, std::abs(c.ricci(a, b) - f.Ric(a, b)));
      g.symmetry = std::max(g.symmetry, std::abs(c.ricci(a, b) - c.ricci(b, a)));
      for (int d = 0; d < n; ++d) {
        g.jet_vs_fd = std::max(g.jet_vs_fd, std::abs(c.gamma(d, a, b) - f.G(d, a, b)));
        for (int e = 0; e < n; ++e) {
          const double r = R.lowered(a, b, d, e);
          g.jet_vs_fd = std::max(g.jet_vs_fd, std::abs(r - f.R(a, b, d, e)));
          g.symmetry = std::max({g.symmetry, std::abs(r + R.lowered(b, a, d, e)), std::abs(r + R.lowered(a, b, e, d)),
                                 std::abs(r - R.lowered(d, e, a, b)),
                                 std::abs(r + R.lowered(b, d, a, e) + R.lowered(d, a, b, e))});
        }
      }
    }
  g.jet_vs_fd = std::max(g.jet_vs_fd, std::abs(c.scalar - f.scalar));
  return g;
}

// 7: jet pipeline against the finite-difference oracle.
void c7(Outcome& o) {
  OracleGap worst;
  int points = 0;
  auto take = [&](const MetricChart& chart, const Point& p) {
    const OracleGap g = oracle_gap(chart, p);
    worst.jet_vs_fd = std::max(worst.jet_vs_fd, g.jet_vs_fd);
    worst.symmetry = std::max(worst.symmetry, g.symmetry);
    ++points;
  };
  const auto charts = testsupport::builtin_charts();
  for (const auto& [label, chart] : charts)
    for (const Point& p : testsupport::sample_points(chart)) take(chart, p);
  std::mt19937 rng(2718);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 3;
    const MetricChart chart = testsupport::random_polynomial_metric(rng, n);
    take(chart, testsupport::random_point(rng, n));
  }
  o.require(worst.jet_vs_fd < 1e-6, "jet vs fd " + fmt(worst.jet_vs_fd));
  o.require(worst.symmetry < 1e-9, "symmetry/Bianchi " + fmt(worst.symmetry));
  o.detail << charts.size() << " built-in charts + 50 random metrics (" << points << " points): max jet-fd gap "
           << fmt(worst.jet_vs_fd) << ", max symmetry/Bianchi defect " << fmt(worst.symmetry);
}

// 8: RK4 against the closed forms.
void c8(Outcome& o) {
  struct Case {
    const char* name;
    std::function<double(int)> dev;
  };
  const std::vector<Case> cases{
      {"conformal D=-2 E=1 [0,2]", [](int n) { return verify_conformal_family(-2, 1, 0, 2, n); }},
      {"exponent A=1 B=1 [0,2]", [](int n) { return verify_warp_family(WarpFamily::Exponent, 1, 1, 0, 2, n); }},
      {"sphere A=2 B=1 [0,2]", [](int n) { return verify_warp_family(WarpFamily::Sphere, 2, 1, 0, 2, n); }},
  };
  for (const Case& c : cases) {
    const double dev = c.dev(kDefaultOdeSteps);
    const double order = measured_order(c.dev, 128);
    o.require(dev < 1e-8, std::string(c.name) + " deviation " + fmt(dev));
    o.require(order >= 3.8 && order <= 4.2, std::string(c.name) + " order " + fmt(order));
    o.detail << c.name << ": dev " << fmt(dev) << ", order " << fmt(order) << "; ";
  }
}

// 9: Hopf cylinders.
void c9(Outcome& o) {
  o.require(constant_solutions(builtin_ambient("s3")) == std::vector<double>{0.0}, "S^3 constants");
  o.require(constant_solutions(builtin_ambient("h2xr")) == std::vector<double>{0.0}, "H^2xR constants");
  o.require(constant_solutions(builtin_ambient("s2xr")) == std::vector<double>{0.0, 1.0}, "S^2xR constants");
  double worst = 0;
  for (const char* n : {"s2xr", "h2xr", "s3", "r3"}) worst = std::max(worst, crosscheck_ambient(builtin_ambient(n)));
  o.require(worst < 1e-6, "crosscheck " + fmt(worst));
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(-1.0 + 0.2 * i);
  const HopfReport r = classify_hopf(builtin_ambient("s2xr"), constant_profile(1.0), grid, 1e-8);
  o.require(r.classification == Classification::ProperBiharmonic, "kappa=1 on S^2xR is " + to_string(r.classification));
  o.detail << "constants S^3 {0}, H^2xR {0}, S^2xR {0,1}; max crosscheck " << fmt(worst) << "; kappa=1 on S^2xR "
           << to_string(r.classification);
}

// 10: invariants on every built-in family.
void c10(Outcome& o) {
  int leaves = 0, minimal = 0, einstein = 0, refused = 0;
  double flip = 0, spec_gap = 0;
  for (const auto& [label, chart] : testsupport::builtin_charts()) {
    const int n = chart.dim();
    for (int s = 0; s < n; ++s)
      for (double t : {0.25, 0.5, 0.75}) {
        const Interval w = chart.sample()[s];
        const SliceLeaf leaf(chart, s, w.lo + t * (w.hi - w.lo));
        const auto grid = leaf_grid(leaf, 2);
        const ResidualReport a = classify(leaf, grid), b = classify(leaf.flipped(), grid);
        ++leaves;
        o.require(a.classification == b.classification, label + ": flip changes the class");
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const double scale = 1 + std::abs(a.normal[k]);
          flip = std::max({flip, std::abs(a.normal[k] + b.normal[k]) / scale,
                           std::abs(a.tangential_norm[k] - b.tangential_norm[k]) / (1 + a.tangential_norm[k]),
                           std::abs(a.H[k] + b.H[k])});
        }
        if (a.classification == Classification::Minimal) {
          ++minimal;
          o.require(a.max_normal < a.tolerances.residual && a.max_tangential < a.tolerances.residual,
                    label + ": minimal leaf with residual " + fmt(std::max(a.max_normal, a.max_tangential)));
        }
        const Point& u = grid.front();
        const double general = normal_residual(leaf, u);
        const ShapeData sh = shape_at(leaf, u);
        const double norm = residual_scale(sh.H, sh.norm_a2);
        // pointwise: the warped sphere is Einstein exactly where lambda^2 = 2
        if (einstein_deviation(chart, {leaf.ambient_point(u)}) < kEinsteinTol) {
          ++einstein;
          const double r = scalar_curvature_at(chart, leaf.ambient_point(u));
          const double C = r / (n * (n - 1.0));
          spec_gap = std::max({spec_gap, std::abs(einstein_residual(leaf, u, r).normal - general) / norm,
                               std::abs(spaceform_residual(leaf, u, C).normal - general) / norm});
        } else {
          try {
            einstein_residual(leaf, u, scalar_curvature_at(chart, leaf.ambient_point(u)));
            o.require(false, label + ": Einstein specialisation accepted a non-Einstein ambient");
          } catch (const Error& e) {
            o.require(e.kind() == ErrorKind::NotApplicable, label + ": " + e.what());
            ++refused;
          }
        }
      }
  }
  o.require(flip < 1e-9, "flip defect " + fmt(flip));
  o.require(spec_gap < 1e-6, "specialisation gap " + fmt(spec_gap));
  o.require(minimal > 0, "no minimal leaf exercised");
  o.detail << leaves << " leaves: flip defect " << fmt(flip) << ", " << minimal << " minimal leaves with zero residual, "
           << einstein << " Einstein leaves with specialisation gap " << fmt(spec_gap) << ", " << refused
           << " non-Einstein refusals";
}

struct Criterion {
  int id;
  const char* title;
  void (*run)(Outcome&);
};

const Criterion kCriteria[] = {
    {1, "conformal family D/(z+E) is proper biharmonic", c1},
    {2, "falsification control (z+E)^-s", c2},
    {3, "doubly warped plane residuals and mean curvature", c3},
    {4, "warped sphere lambda = sqrt(At+B)", c4},
    {5, "sphere sweep and Clifford hypersurfaces", c5},
    {6, "umbilical leaves with r <= 0", c6},
    {7, "curvature engine vs finite-difference oracle", c7},
    {8, "RK4 verification of the closed forms", c8},
    {9, "Hopf cylinders", c9},
    {10, "invariant suites on every built-in family", c10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long v = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || v < 1 || v > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1..10 ...]\n", argv[0]);
      return 2;
    }
    wanted.push_back(static_cast<int>(v));
  }
  bool all = true;
  for (const Criterion& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.line().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
