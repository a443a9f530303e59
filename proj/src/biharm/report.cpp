#include "biharm/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "biharm/ode.hpp"

namespace biharm {

namespace {

constexpr int kDefaultGrid = 3;
constexpr int kDefaultHopfGrid = 9;
constexpr double kDefaultOdeTol = 1e-8;
constexpr int kDefaultOrderSteps = 128;

std::string where(const std::string& key) { return "config '" + key + "': "; }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw invalid_argument(std::string("config is missing '") + key + "'");
  return j.at(key);
}

double expect_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw invalid_argument(where(key) + "expected a number, got " + j.dump());
  return j.get<double>();
}

int expect_int(const json& j, const std::string& key, int min_value) {
  if (!j.is_number_integer() && !(j.is_number() && j.get<double>() == std::trunc(j.get<double>())))
    throw invalid_argument(where(key) + "expected an integer, got " + j.dump());
  const double v = j.get<double>();
  if (v < min_value || v > std::numeric_limits<int>::max())
    throw invalid_argument(where(key) + "must be >= " + std::to_string(min_value));
  return static_cast<int>(v);
}

Interval interval_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) throw invalid_argument(where(key) + "expected [lo, hi]");
  auto bound = [&](const json& b, double inf) { return b.is_null() ? inf : value_from_json(b); };
  const double inf = std::numeric_limits<double>::infinity();
  return {bound(j[0], -inf), bound(j[1], inf)};
}

Box box_from_json(const json& j, const std::string& key) {
  if (!j.is_array()) throw invalid_argument(where(key) + "expected an array of [lo, hi]");
  Box b;
  for (const json& e : j) b.push_back(interval_from_json(e, key));
  return b;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : cols_(header.size()) { row(header); }
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_) throw std::logic_error("CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << csv_escape(cells[i]);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::size_t cols_;
  std::ostringstream out_;
};

Tolerances tolerances_from(const json& cfg, const Overrides& ov) {
  Tolerances t;
  if (cfg.contains("tolerances")) {
    const json& j = cfg.at("tolerances");
    if (j.contains("residual")) t.residual = expect_number(j.at("residual"), "tolerances.residual");
    if (j.contains("minimal")) t.minimal = expect_number(j.at("minimal"), "tolerances.minimal");
    if (j.contains("step")) t.step = expect_number(j.at("step"), "tolerances.step");
  }
  if (ov.tol_residual) t.residual = *ov.tol_residual;
  if (ov.tol_minimal) t.minimal = *ov.tol_minimal;
  if (ov.step) t.step = *ov.step;
  if (!(t.residual > 0.0) || !(t.minimal > 0.0) || !(t.step > 0.0))
    throw invalid_argument("tolerances and step must be positive");
  return t;
}

int grid_from(const json& cfg, const Overrides& ov, int fallback) {
  if (ov.grid) {
    if (*ov.grid < 1) throw invalid_argument("--grid must be >= 1");
    return *ov.grid;
  }
  return cfg.contains("grid") ? expect_int(cfg.at("grid"), "grid", 1) : fallback;
}

// Expected classification, optionally per leaf value.
struct Expectation {
  std::optional<Classification> fallback;
  std::vector<std::pair<double, Classification>> at;

  std::optional<Classification> for_value(double v) const {
    for (const auto& [x, c] : at)
      if (std::abs(x - v) <= 1e-12 * std::max(1.0, std::abs(v))) return c;
    return fallback;
  }
};

Expectation expectation_from(const json& cfg, const Overrides& ov) {
  Expectation e;
  if (cfg.contains("expect")) {
    const json& j = cfg.at("expect");
    if (j.is_string()) e.fallback = classification_from_string(j.get<std::string>());
    else if (j.is_object()) {
      if (j.contains("default")) e.fallback = classification_from_string(j.at("default").get<std::string>());
      if (j.contains("at"))
        for (const json& a : j.at("at"))
          e.at.emplace_back(value_from_json(require(a, "value")),
                            classification_from_string(require(a, "class").get<std::string>()));
    } else {
      throw invalid_argument(where("expect") + "expected a class name or {default, at}");
    }
  }
  if (ov.expect) e.fallback = classification_from_string(*ov.expect);
  return e;
}

struct LeafSpec {
  json slice;
  std::vector<double> values;
  int orientation = 1;
};

LeafSpec leaf_from(const json& cfg) {
  const json& j = require(cfg, "leaf");
  LeafSpec l;
  l.slice = require(j, "slice");
  l.values = values_from_json(require(j, "value"));
  if (j.contains("orientation")) l.orientation = expect_int(j.at("orientation"), "leaf.orientation", -1);
  return l;
}

int slice_index(const MetricChart& chart, const json& slice) {
  if (slice.is_string()) {
    const int i = chart.coord_index(slice.get<std::string>());
    if (i < 0) throw invalid_argument("chart '" + chart.name() + "' has no coordinate '" + slice.get<std::string>() + "'");
    return i;
  }
  return expect_int(slice, "leaf.slice", 0);
}

// Lexicographic product of the sweep axes; the first key (in sorted order) varies slowest.
std::vector<ParamMap> sweep_points(const json& cfg, const ParamMap& base) {
  std::vector<ParamMap> out{base};
  if (!cfg.contains("sweep")) return out;
  const json& s = cfg.at("sweep");
  if (!s.is_object()) throw invalid_argument(where("sweep") + "expected an object of parameter ranges");
  for (const auto& [key, range] : s.items()) {
    const std::vector<double> vals = values_from_json(range);
    std::vector<ParamMap> next;
    for (const ParamMap& p : out)
      for (double v : vals) {
        ParamMap q = p;
        q[key] = v;
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<std::string> param_columns(const std::vector<ParamMap>& rows) {
  std::vector<std::string> keys;
  if (!rows.empty())
    for (const auto& [k, v] : rows.front()) keys.push_back(k);
  return keys;
}

json params_json(const ParamMap& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

json family_json(const FamilySpec& f) {
  json j{{"name", f.name}, {"params", params_json(f.params)}};
  if (!f.exprs.empty()) j["exprs"] = f.exprs;
  return j;
}

RunResult cmd_check(const json& cfg, const Overrides& ov) {
  if (cfg.contains("sweep")) throw invalid_argument("'check' takes a single configuration; use 'sweep'");
  const FamilySpec fam = family_from_json(require(cfg, "family"));
  const MetricChart chart = build_family(fam);
  const LeafSpec ls = leaf_from(cfg);
  if (ls.values.size() != 1) throw invalid_argument("'check' takes a single leaf value; use 'sweep'");
  const Tolerances tol = tolerances_from(cfg, ov);
  const int n = grid_from(cfg, ov, kDefaultGrid);
  const Expectation ex = expectation_from(cfg, ov);

  const SliceLeaf leaf(chart, slice_index(chart, ls.slice), ls.values[0], ls.orientation);
  const ResidualReport rep = classify(leaf, leaf_grid(leaf, n), tol);

  json out;
  out["command"] = "check";
  out["family"] = family_json(fam);
  out["leaf"] = {{"slice", chart.coords()[leaf.slice_index()]},
                 {"value", leaf.slice_value()},
                 {"orientation", leaf.orientation()}};
  out["grid_points_per_axis"] = n;
  out["report"] = to_json(rep);
  RunResult r;
  if (auto want = ex.for_value(leaf.slice_value())) {
    out["expected"] = to_string(*want);
    out["matches_expected"] = *want == rep.classification;
    if (*want != rep.classification) {
      r.exit_code = kExitUnexpected;
      r.message = "classification " + to_string(rep.classification) + " differs from expected " + to_string(*want);
    }
  }
  r.output = out.dump(2) + "\n";
  return r;
}

RunResult cmd_sweep(const json& cfg, const Overrides& ov) {
  const FamilySpec base = family_from_json(require(cfg, "family"));
  const LeafSpec ls = leaf_from(cfg);
  const Tolerances tol = tolerances_from(cfg, ov);
  const int n = grid_from(cfg, ov, kDefaultGrid);
  const Expectation ex = expectation_from(cfg, ov);
  const std::vector<ParamMap> points = sweep_points(cfg, base.params);
  const auto keys = param_columns(points);

  std::vector<std::string> header = keys;
  for (const char* c : {"leaf_value", "max_normal_residual", "max_tangential_residual", "max_abs_H",
                        "classification", "tol_residual", "tol_minimal", "grid_points"})
    header.emplace_back(c);
  Csv csv(header);
  RunResult r;
  for (const ParamMap& p : points) {
    FamilySpec fam = base;
    fam.params = p;
    const MetricChart chart = build_family(fam);
    const int s = slice_index(chart, ls.slice);
    for (double v : ls.values) {
      const SliceLeaf leaf(chart, s, v, ls.orientation);
      const auto grid = leaf_grid(leaf, n);
      const ResidualReport rep = classify(leaf, grid, tol);
      std::vector<std::string> row;
      for (const auto& k : keys) row.push_back(format_number(p.at(k)));
      row.insert(row.end(), {format_number(v), format_number(rep.max_normal), format_number(rep.max_tangential),
                             format_number(rep.max_abs_H), to_string(rep.classification),
                             format_number(tol.residual), format_number(tol.minimal),
                             std::to_string(grid.size())});
      csv.row(row);
      const auto want = ex.for_value(v);
      if (want && *want != rep.classification) {
        r.exit_code = kExitUnexpected;
        r.message += "leaf " + format_number(v) + ": " + to_string(rep.classification) + ", expected " +
                     to_string(*want) + "\n";
      }
    }
  }
  r.output = csv.str();
  return r;
}

RunResult cmd_ode(const json& cfg, const Overrides&) {
  const json& o = require(cfg, "ode");
  const std::string family = require(o, "family").get<std::string>();
  ParamMap base;
  if (o.contains("params"))
    for (const auto& [k, v] : o.at("params").items()) base[k] = value_from_json(v);
  const Interval iv = interval_from_json(require(o, "interval"), "ode.interval");
  const int steps = o.contains("steps") ? expect_int(o.at("steps"), "ode.steps", 2) : kDefaultOdeSteps;
  const double tol = o.contains("tolerance") ? expect_number(o.at("tolerance"), "ode.tolerance") : kDefaultOdeTol;
  const int order_steps =
      o.contains("order_steps") ? expect_int(o.at("order_steps"), "ode.order_steps", 2) : kDefaultOrderSteps;
  const std::vector<ParamMap> points = sweep_points(cfg, base);
  const auto keys = param_columns(points);

  auto deviation = [&](const ParamMap& p, int n) {
    auto get = [&](const char* k) {
      auto it = p.find(k);
      if (it == p.end()) throw invalid_argument("ode family '" + family + "' needs parameter '" + k + "'");
      return it->second;
    };
    if (family == "conformal") return verify_conformal_family(get("D"), get("E"), iv.lo, iv.hi, n);
    if (family == "exponent") return verify_warp_family(WarpFamily::Exponent, get("A"), get("B"), iv.lo, iv.hi, n);
    if (family == "sphere") return verify_warp_family(WarpFamily::Sphere, get("A"), get("B"), iv.lo, iv.hi, n);
    throw invalid_argument("unknown ode family '" + family + "' (conformal, exponent, sphere)");
  };

  std::vector<std::string> header{"family"};
  header.insert(header.end(), keys.begin(), keys.end());
  for (const char* c : {"a", "b", "steps", "max_deviation", "order", "order_steps", "tolerance"})
    header.emplace_back(c);
  Csv csv(header);
  RunResult r;
  for (const ParamMap& p : points) {
    const double dev = deviation(p, steps);
    const double order = measured_order([&](int n) { return deviation(p, n); }, order_steps);
    std::vector<std::string> row{family};
    for (const auto& k : keys) row.push_back(format_number(p.at(k)));
    row.insert(row.end(), {format_number(iv.lo), format_number(iv.hi), std::to_string(steps), format_number(dev),
                           format_number(order), std::to_string(order_steps), format_number(tol)});
    csv.row(row);
    if (!(dev < tol)) {
      r.exit_code = kExitUnexpected;
      r.message += "deviation " + format_number(dev) + " exceeds " + format_number(tol) + "\n";
    }
  }
  r.output = csv.str();
  return r;
}

RunResult cmd_hopf(const json& cfg, const Overrides& ov) {
  const json& amb_j = require(cfg, "ambient");
  const json& kappa_j = require(cfg, "kappa");
  const std::string kappa_text = kappa_j.is_string() ? kappa_j.get<std::string>() : format_number(expect_number(kappa_j, "kappa"));
  const Interval iv = cfg.contains("interval") ? interval_from_json(cfg.at("interval"), "interval") : Interval{-1.0, 1.0};
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
    throw invalid_argument(where("interval") + "needs finite lo < hi");
  const Tolerances tol = tolerances_from(cfg, ov);
  const int n = grid_from(cfg, ov, kDefaultHopfGrid);
  const Expectation ex = expectation_from(cfg, ov);
  ParamMap base;
  if (cfg.contains("params"))
    for (const auto& [k, v] : cfg.at("params").items()) base[k] = value_from_json(v);
  const std::vector<ParamMap> points = sweep_points(cfg, base);
  const auto keys = param_columns(points);

  std::vector<double> grid;
  for (int k = 0; k < n; ++k) grid.push_back(iv.lo + (iv.hi - iv.lo) * (k + 1) / (n + 1));

  std::vector<std::string> header{"ambient"};
  header.insert(header.end(), keys.begin(), keys.end());
  for (const char* c : {"kappa", "tau", "max_residual_1", "max_residual_2", "max_residual_3", "max_abs_kappa",
                        "crosscheck", "classification", "geodesic_radius", "chordal_radius", "tol", "grid_points"})
    header.emplace_back(c);
  Csv csv(header);
  RunResult r;
  const std::vector<std::string> s_coord{"s"};
  for (const ParamMap& p : points) {
    const SubmersionAmbient amb = ambient_from_json(amb_j);
    CurveProfile prof{make_field(kappa_text, s_coord, p), iv};
    const HopfReport rep = classify_hopf(amb, prof, grid, tol.residual);
    std::string geo, chord;
    if (amb.name == "s2xr" && prof.kappa.is_constant()) {
      const CircleRadii cr = circle_radii(prof.kappa(std::vector<double>{grid[0]}));
      geo = format_number(cr.geodesic);
      chord = format_number(cr.chordal);
    }
    std::vector<std::string> row{amb.name};
    for (const auto& k : keys) row.push_back(format_number(p.at(k)));
    row.insert(row.end(),
               {prof.kappa.is_constant() ? format_number(prof.kappa(std::vector<double>{grid[0]})) : kappa_text,
                format_number(amb.tau), format_number(rep.max_residual[0]),
                format_number(rep.max_residual[1]), format_number(rep.max_residual[2]),
                format_number(rep.max_abs_kappa), rep.crosscheck ? format_number(*rep.crosscheck) : std::string(),
                to_string(rep.classification), geo, chord, format_number(tol.residual), std::to_string(n)});
    csv.row(row);
    // per-value expectations are keyed by the constant curvature
    const std::optional<Classification> want =
        prof.kappa.is_constant() ? ex.for_value(prof.kappa(std::vector<double>{grid[0]})) : ex.fallback;
    if (want && *want != rep.classification) {
      r.exit_code = kExitUnexpected;
      r.message += "hopf row: " + to_string(rep.classification) + ", expected " + to_string(*want) + "\n";
    }
  }
  r.output = csv.str();
  return r;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

double value_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const Jet2 v = bind_and_eval(parse_expression(j.get<std::string>()), {}, {}, {});
    return v.value();
  }
  throw invalid_argument("expected a number or an expression string, got " + j.dump());
}

std::vector<double> values_from_json(const json& j) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const json& e : j) out.push_back(value_from_json(e));
    if (out.empty()) throw invalid_argument("value list is empty");
    return out;
  }
  if (j.is_object()) {
    const double from = value_from_json(require(j, "from"));
    const double to = value_from_json(require(j, "to"));
    const double step = value_from_json(require(j, "step"));
    if (!(step > 0.0) || !(to >= from)) throw invalid_argument("range needs step > 0 and to >= from");
    const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
    if (count > 1000000) throw invalid_argument("range has too many values");
    std::vector<double> out;
    for (long k = 0; k < count; ++k) out.push_back(from + static_cast<double>(k) * step);
    return out;
  }
  return {value_from_json(j)};
}

FamilySpec family_from_json(const json& j) {
  FamilySpec f;
  if (j.is_string()) {
    f.name = j.get<std::string>();
    return f;
  }
  f.name = require(j, "name").get<std::string>();
  if (j.contains("params"))
    for (const auto& [k, v] : j.at("params").items()) f.params[k] = value_from_json(v);
  if (j.contains("exprs"))
    for (const auto& [k, v] : j.at("exprs").items()) f.exprs[k] = v.get<std::string>();
  if (j.contains("factors"))
    for (const json& fac : j.at("factors"))
      f.factors.push_back({require(fac, "exponent").get<std::string>(),
                           fac.contains("dim") ? expect_int(fac.at("dim"), "factors.dim", 1) : 1});
  if (j.contains("coords")) f.coords = j.at("coords").get<std::vector<std::string>>();
  if (j.contains("metric"))
    for (const json& row : j.at("metric")) {
      std::vector<std::string> r;
      for (const json& e : row) r.push_back(e.is_string() ? e.get<std::string>() : format_number(expect_number(e, "metric")));
      f.metric.push_back(std::move(r));
    }
  if (j.contains("domain")) f.domain = box_from_json(j.at("domain"), "family.domain");
  if (j.contains("sample")) f.sample = box_from_json(j.at("sample"), "family.sample");
  return f;
}

SubmersionAmbient ambient_from_json(const json& j) {
  if (j.is_string()) return builtin_ambient(j.get<std::string>());
  const std::string name = require(j, "name").get<std::string>();
  SubmersionAmbient a;
  if (has_registered_chart(name)) a = builtin_ambient(name);
  else a = {name, 0.0, ScalarField::constant(1, 0.0), ScalarField::constant(1, 0.0), ScalarField::constant(1, 0.0)};
  if (j.contains("tau")) a.tau = value_from_json(j.at("tau"));
  const std::vector<std::string> s{"s"};
  auto field = [&](const char* key, ScalarField& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    out = make_field(v.is_string() ? v.get<std::string>() : format_number(expect_number(v, key)), s);
  };
  field("ric_xi_xi", a.ric_xi_xi);
  field("ric_xi_x", a.ric_xi_x);
  field("ric_xi_v", a.ric_xi_v);
  return a;
}

json to_json(const ResidualReport& r) {
  json grid = json::array();
  for (const Point& p : r.grid) grid.push_back(p);
  return {{"classification", to_string(r.classification)},
          {"max_abs_H", r.max_abs_H},
          {"max_normal_residual", r.max_normal},
          {"max_tangential_residual", r.max_tangential},
          {"tolerances", {{"residual", r.tolerances.residual}, {"minimal", r.tolerances.minimal}, {"step", r.tolerances.step}}},
          {"grid", grid},
          {"H", r.H},
          {"norm_A2", r.norm_a2},
          {"normal_residual", r.normal},
          {"tangential_residual_norm", r.tangential_norm},
          {"normal_residual_normalized", r.normal_normalized},
          {"tangential_residual_normalized", r.tangential_normalized}};
}

json to_json(const HopfReport& r) {
  json j{{"classification", to_string(r.classification)},
         {"max_residual", r.max_residual},
         {"max_abs_kappa", r.max_abs_kappa},
         {"grid", r.grid},
         {"tol", r.tol}};
  j["crosscheck"] = r.crosscheck ? json(*r.crosscheck) : json(nullptr);
  return j;
}

RunResult run_config(const json& cfg, const Overrides& ov) {
  try {
    const std::string cmd = require(cfg, "command").get<std::string>();
    if (cmd == "check") return cmd_check(cfg, ov);
    if (cmd == "sweep") return cmd_sweep(cfg, ov);
    if (cmd == "ode") return cmd_ode(cfg, ov);
    if (cmd == "hopf") return cmd_hopf(cfg, ov);
    throw invalid_argument("unknown command '" + cmd + "' (check, sweep, ode, hopf)");
  } catch (const std::exception& e) {
    return {kExitError, {}, e.what()};
  }
}

RunResult run_config_text(const std::string& text, const Overrides& ov) {
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    return {kExitError, {}, std::string("config is not valid JSON: ") + e.what()};
  }
  return run_config(cfg, ov);
}

}  // namespace biharm
