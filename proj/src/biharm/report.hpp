#pragma once

// JSON run configurations and their reports. See docs/config.md for the schema.

#include <optional>
#include <string>

#include <json.hpp>

#include "biharm/biharmonic.hpp"
#include "biharm/families.hpp"
#include "biharm/hopf.hpp"

namespace biharm {

using json = nlohmann::json;

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<double> tol_residual;
  std::optional<double> tol_minimal;
  std::optional<int> grid;
  std::optional<double> step;
  std::optional<std::string> expect;
};

enum ExitCode { kExitOk = 0, kExitUnexpected = 1, kExitError = 2 };

struct RunResult {
  int exit_code = kExitOk;
  std::string output;  // JSON report (check) or CSV (sweep, ode, hopf)
  std::string message; // diagnostics for stderr; empty on success
};

/// Never throws: evaluation and validation errors give exit code 2.
RunResult run_config(const json& config, const Overrides& overrides = {});
RunResult run_config_text(const std::string& config_text, const Overrides& overrides = {});

// Building blocks shared with the C API.
FamilySpec family_from_json(const json& j);
/// Number, DSL string ("pi/4") or {"from", "to", "step"} range / array of these.
std::vector<double> values_from_json(const json& j);
double value_from_json(const json& j);
SubmersionAmbient ambient_from_json(const json& j);

json to_json(const ResidualReport& r);
json to_json(const HopfReport& r);

/// Shortest round-trip decimal representation, independent of the locale.
std::string format_number(double x);

}  // namespace biharm
