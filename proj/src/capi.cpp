#include "biharm/biharm.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "biharm/ode.hpp"
#include "biharm/report.hpp"

using namespace biharm;

struct bh_chart {
  MetricChart chart;
};

struct bh_leaf {
  SliceLeaf leaf;
};

namespace {

thread_local std::string g_last_error;

bh_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return BH_INVALID_ARGUMENT;
    case ErrorKind::Parse: return BH_PARSE_ERROR;
    case ErrorKind::Domain: return BH_DOMAIN_ERROR;
    case ErrorKind::Constraint: return BH_CONSTRAINT_VIOLATION;
    case ErrorKind::Numerical: return BH_NUMERICAL_ERROR;
    case ErrorKind::NotApplicable: return BH_NOT_APPLICABLE;
  }
  return BH_INTERNAL_ERROR;
}

template <class F>
bh_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return BH_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return BH_PARSE_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BH_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return BH_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw invalid_argument(std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_loose(const char* text) {
  // A bare name is accepted in place of a JSON string.
  const std::string s(text);
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (s[first] == '{' || s[first] == '"')) return json::parse(s);
  return json(s);
}

std::vector<double> point(const double* p, size_t n, std::size_t expected) {
  if (n != expected) throw invalid_argument("point has " + std::to_string(n) + " coordinates, expected " + std::to_string(expected));
  need(p, "point");
  return {p, p + n};
}

bh_classification c_class(Classification c) {
  switch (c) {
    case Classification::Minimal: return BH_MINIMAL;
    case Classification::ProperBiharmonic: return BH_PROPER_BIHARMONIC;
    case Classification::NonBiharmonic: return BH_NON_BIHARMONIC;
  }
  return BH_NON_BIHARMONIC;
}

}  // namespace

extern "C" {

const char* bh_last_error(void) { return g_last_error.c_str(); }

const char* bh_status_name(bh_status s) {
  switch (s) {
    case BH_OK: return "ok";
    case BH_INVALID_ARGUMENT: return "invalid argument";
    case BH_PARSE_ERROR: return "parse error";
    case BH_DOMAIN_ERROR: return "domain error";
    case BH_CONSTRAINT_VIOLATION: return "constraint violation";
    case BH_NUMERICAL_ERROR: return "numerical error";
    case BH_NOT_APPLICABLE: return "not applicable";
    case BH_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* bh_classification_name(bh_classification c) {
  switch (c) {
    case BH_MINIMAL: return "Minimal";
    case BH_PROPER_BIHARMONIC: return "ProperBiharmonic";
    case BH_NON_BIHARMONIC: return "NonBiharmonic";
  }
  return "unknown";
}

void bh_string_free(char* s) { std::free(s); }

bh_status bh_chart_create(const char* family_json, bh_chart** out) {
  return guarded([&] {
    need(family_json, "family_json");
    need(out, "out");
    *out = new bh_chart{build_family(family_from_json(parse_loose(family_json)))};
  });
}

void bh_chart_destroy(bh_chart* chart) { delete chart; }

int bh_chart_dim(const bh_chart* chart) { return chart ? chart->chart.dim() : 0; }

bh_status bh_chart_coord_name(const bh_chart* chart, int index, const char** out) {
  return guarded([&] {
    need(chart, "chart");
    need(out, "out");
    if (index < 0 || index >= chart->chart.dim()) throw invalid_argument("coordinate index out of range");
    *out = chart->chart.coords()[index].c_str();
  });
}

bh_status bh_metric(const bh_chart* chart, const double* p, size_t n, double* out) {
  return guarded([&] {
    need(chart, "chart");
    need(out, "out");
    const Matrix g = metric_at(chart->chart, point(p, n, chart->chart.dim()));
    for (Eigen::Index a = 0; a < g.rows(); ++a)
      for (Eigen::Index b = 0; b < g.cols(); ++b) out[a * g.cols() + b] = g(a, b);
  });
}

bh_status bh_christoffel(const bh_chart* chart, const double* p, size_t n, double* out) {
  return guarded([&] {
    need(chart, "chart");
    need(out, "out");
    const Christoffel G = christoffel_at(chart->chart, point(p, n, chart->chart.dim()));
    const int d = G.dim();
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out[(c * d + a) * d + b] = G(c, a, b);
  });
}

bh_status bh_riemann_lowered(const bh_chart* chart, const double* p, size_t n, double* out) {
  return guarded([&] {
    need(chart, "chart");
    need(out, "out");
    const Riemann R = riemann_at(chart->chart, point(p, n, chart->chart.dim()));
    const int d = R.dim();
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) out[((a * d + b) * d + c) * d + e] = R.lowered(a, b, c, e);
  });
}

bh_status bh_ricci(const bh_chart* chart, const double* p, size_t n, double* out) {
  return guarded([&] {
    need(chart, "chart");
    need(out, "out");
    const Matrix r = ricci_at(chart->chart, point(p, n, chart->chart.dim()));
    for (Eigen::Index a = 0; a < r.rows(); ++a)
      for (Eigen::Index b = 0; b < r.cols(); ++b) out[a * r.cols() + b] = r(a, b);
  });
}

bh_status bh_scalar_curvature(const bh_chart* chart, const double* p, size_t n, double* out) {
  return guarded([&] {
    need(chart, "chart");
    need(out, "out");
    *out = scalar_curvature_at(chart->chart, point(p, n, chart->chart.dim()));
  });
}

bh_status bh_leaf_create(const bh_chart* chart, int slice, double value, int orientation, bh_leaf** out) {
  return guarded([&] {
    need(chart, "chart");
    need(out, "out");
    *out = new bh_leaf{SliceLeaf(chart->chart, slice, value, orientation)};
  });
}

void bh_leaf_destroy(bh_leaf* leaf) { delete leaf; }

int bh_leaf_dim(const bh_leaf* leaf) { return leaf ? leaf->leaf.dim() : 0; }

bh_status bh_leaf_shape(const bh_leaf* leaf, const double* u, size_t m, double* H, double* norm_a2) {
  return guarded([&] {
    need(leaf, "leaf");
    const ShapeData d = shape_at(leaf->leaf, point(u, m, leaf->leaf.dim()));
    if (H) *H = d.H;
    if (norm_a2) *norm_a2 = d.norm_a2;
  });
}

bh_status bh_leaf_principal_curvatures(const bh_leaf* leaf, const double* u, size_t m, double* out) {
  return guarded([&] {
    need(leaf, "leaf");
    need(out, "out");
    const auto k = principal_curvatures(leaf->leaf, point(u, m, leaf->leaf.dim()));
    std::copy(k.begin(), k.end(), out);
  });
}

bh_status bh_leaf_residuals(const bh_leaf* leaf, const double* u, size_t m, double step, double* normal,
                            double* tangential) {
  return guarded([&] {
    need(leaf, "leaf");
    const ResidualTerms t =
        residual_terms(leaf->leaf, point(u, m, leaf->leaf.dim()), step > 0.0 ? step : kDefaultLeafStep);
    if (normal) *normal = t.normal;
    if (tangential)
      for (Eigen::Index i = 0; i < t.tangential.size(); ++i) tangential[i] = t.tangential(i);
  });
}

bh_status bh_leaf_classify(const bh_leaf* leaf, int points_per_axis, double tol_residual, double tol_minimal,
                           double step, bh_classification* out, char** report_json) {
  return guarded([&] {
    need(leaf, "leaf");
    need(out, "out");
    Tolerances tol;
    if (tol_residual > 0.0) tol.residual = tol_residual;
    if (tol_minimal > 0.0) tol.minimal = tol_minimal;
    if (step > 0.0) tol.step = step;
    const ResidualReport rep = classify(leaf->leaf, leaf_grid(leaf->leaf, points_per_axis), tol);
    *out = c_class(rep.classification);
    if (report_json) *report_json = dup(to_json(rep).dump(2));
  });
}

bh_status bh_umbilical_einstein(double r, int m, double* out3, size_t* count) {
  return guarded([&] {
    need(out3, "out3");
    need(count, "count");
    const auto k = umbilical_einstein_analysis(r, m);
    std::copy(k.begin(), k.end(), out3);
    *count = k.size();
  });
}

bh_status bh_ode_verify(const char* family, double p1, double p2, double a, double b, int steps,
                        double* max_deviation) {
  return guarded([&] {
    need(family, "family");
    need(max_deviation, "max_deviation");
    const std::string f(family);
    if (f == "conformal") *max_deviation = verify_conformal_family(p1, p2, a, b, steps);
    else if (f == "exponent") *max_deviation = verify_warp_family(WarpFamily::Exponent, p1, p2, a, b, steps);
    else if (f == "sphere") *max_deviation = verify_warp_family(WarpFamily::Sphere, p1, p2, a, b, steps);
    else throw invalid_argument("unknown ode family '" + f + "' (conformal, exponent, sphere)");
  });
}

bh_status bh_hopf_constant_solutions(const char* ambient_json, double* out2, size_t* count) {
  return guarded([&] {
    need(ambient_json, "ambient_json");
    need(out2, "out2");
    need(count, "count");
    const auto k = constant_solutions(ambient_from_json(parse_loose(ambient_json)));
    std::copy(k.begin(), k.end(), out2);
    *count = k.size();
  });
}

bh_status bh_hopf_crosscheck(const char* ambient_json, double* deviation) {
  return guarded([&] {
    need(ambient_json, "ambient_json");
    need(deviation, "deviation");
    *deviation = crosscheck_ambient(ambient_from_json(parse_loose(ambient_json)));
  });
}

bh_status bh_hopf_classify(const char* ambient_json, const char* kappa_expr, double lo, double hi, int points,
                           double tol, bh_classification* out, double residuals[3]) {
  return guarded([&] {
    need(ambient_json, "ambient_json");
    need(kappa_expr, "kappa_expr");
    need(out, "out");
    if (points < 1) throw invalid_argument("points must be >= 1");
    const std::vector<std::string> s{"s"};
    const CurveProfile prof{make_field(kappa_expr, s), {lo, hi}};
    std::vector<double> grid;
    for (int k = 0; k < points; ++k) grid.push_back(lo + (hi - lo) * (k + 1) / (points + 1));
    const HopfReport rep = classify_hopf(ambient_from_json(parse_loose(ambient_json)), prof, grid, tol);
    *out = c_class(rep.classification);
    if (residuals) std::copy(rep.max_residual.begin(), rep.max_residual.end(), residuals);
  });
}

bh_status bh_run_config(const char* config_json, const char* overrides_json, char** output, char** message,
                        int* exit_code) {
  return guarded([&] {
    need(config_json, "config_json");
    need(output, "output");
    need(message, "message");
    need(exit_code, "exit_code");
    Overrides ov;
    if (overrides_json) {
      const json o = json::parse(overrides_json);
      if (!o.is_object()) throw invalid_argument("overrides_json must be a JSON object");
      if (o.contains("tol_residual")) ov.tol_residual = o.at("tol_residual").get<double>();
      if (o.contains("tol_minimal")) ov.tol_minimal = o.at("tol_minimal").get<double>();
      if (o.contains("grid")) ov.grid = o.at("grid").get<int>();
      if (o.contains("step")) ov.step = o.at("step").get<double>();
      if (o.contains("expect")) ov.expect = o.at("expect").get<std::string>();
    }
    const RunResult r = run_config_text(config_json, ov);
    char* out = dup(r.output);
    try {
      *message = dup(r.message);
    } catch (...) {
      std::free(out);
      throw;
    }
    *output = out;
    *exit_code = r.exit_code;
  });
}

}  // extern "C"
