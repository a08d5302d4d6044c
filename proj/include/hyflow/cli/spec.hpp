#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hyflow/error.hpp"
#include "hyflow/geometry.hpp"
#include "hyflow/measure.hpp"
#include "hyflow/problem2.hpp"
#include "hyflow/problem3.hpp"

namespace hyflow::cli {

// Schema error for a key the spec format does not define.
class UnknownFieldError : public SpecError {
 public:
  using SpecError::SpecError;
};

struct ProblemSpec {
  std::string problem;  // p1 | p2 | p3
  nlohmann::json ramp_json;
  RampProfile ramp = RampProfile::wedge(0.0);
  double E0 = 1.0;
  std::optional<DeadGasSpec> dead_gas;  // p2
  std::optional<JetSpec> jet;           // p3
  double x_max = 0.0;                   // 0 selects the per-problem default
  double tol = 1e-10;
  int samples = 2001;                   // output samples per curve
  nlohmann::json source;                // document the spec was read from

  std::optional<double> x_star() const;
  double effective_x_max() const;
};

struct Overrides {
  std::optional<double> x_max;
  std::optional<double> tol;
};

// Parses and validates a spec document. SpecError messages carry "line:column" for
// syntax errors and a JSON pointer for schema errors; relative CSV paths resolve
// against base_dir.
ProblemSpec parse_spec(const std::string& text, const std::string& base_dir = ".");
ProblemSpec spec_from_json(const nlohmann::json& doc, const std::string& base_dir = ".");
ProblemSpec load_spec(const std::string& path);
void apply_overrides(ProblemSpec& spec, const Overrides& overrides);

// Parses JSON text, translating syntax errors to SpecError with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

RampProfile ramp_from_json(const nlohmann::json& ramp, const std::string& base_dir);

// Runs the matching solver.
MeasureSolution solve(const ProblemSpec& spec);

// Sweep parameter keys map to JSON pointers ("p_bar" -> /p_bar, "v_bar" -> /jet/v, ...).
std::string grid_key_pointer(const std::string& key);

}  // namespace hyflow::cli
