#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyflow/cli/spec.hpp"

namespace hyflow::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalidSpec = 2,
  kInadmissible = 3,
  kBlowUp = 4,
  kVerifyFailed = 5,
};

struct CommandOptions {
  std::optional<std::string> spec_path;
  std::optional<std::string> solution_path;
  std::string out_dir = ".";
  Overrides overrides;
  int levels = 5;
  double dx = 1e-3;
  std::vector<std::string> grid;  // KEY=LO:HI:STEP
  std::string format = "all";     // csv | json | svg | all
  int threads = 0;
};

struct GridAxis {
  std::string key;
  std::string pointer;
  std::vector<double> values;
};

// KEY=LO:HI:STEP; LO > HI gives an empty axis.
GridAxis parse_grid_axis(const std::string& text);

struct VerifyOutcome {
  bool pass = false;
  int test_functions = 0;
  nlohmann::json summary;  // pass flag, weak-form summary, Radon-Nikodym deviations
  nlohmann::json report;   // per-entry residuals and fits
};

// Weak-form study on the standard grid plus the Radon-Nikodym check. Tabulated
// solutions (read back from files) pass residuals at or below 1e-9 regardless of order.
VerifyOutcome verify_solution(const MeasureSolution& solution, int levels, bool tabulated,
                              int threads = 0);

int run_solve(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_verify(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_oracle(const CommandOptions& options, std::ostream& out, std::ostream& err);

// Height of the free layer (any curve other than the wall) covering x, or NaN.
double free_layer_height(const MeasureSolution& solution, double x);

}  // namespace hyflow::cli
