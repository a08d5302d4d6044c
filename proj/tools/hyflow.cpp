#include <iostream>

#include <CLI11.hpp>

#include "hyflow/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace hyflow::cli;
  CLI::App app{"Measure solutions of hypersonic-limit flow past ramps"};
  app.require_subcommand(1);
  CommandOptions options;
  std::string spec_path, solution_path;
  double x_max = 0.0, tol = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "Problem spec (JSON)");
    cmd->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--x-max", x_max, "Right end of the computed range");
    cmd->add_option("--tol", tol, "Solver tolerance");
    cmd->add_option("--threads", options.threads, "Worker threads (0 = hardware)");
  };

  auto* solve = app.add_subcommand("solve", "Construct a solution and write JSON/CSV/SVG");
  add_common(solve);
  solve->add_option("--format", options.format, "csv|json|svg|all")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Weak-form residual study of a solution");
  add_common(verify);
  verify->add_option("--solution", solution_path, "Previously written solution.json");
  verify->add_option("--levels", options.levels, "Refinement levels")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Solve over a parameter grid");
  add_common(sweep);
  sweep->add_option("--grid", options.grid, "KEY=LO:HI:STEP (repeatable)");
  sweep->add_option("--format", options.format, "csv|svg|all")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Discrete accretion cross-check");
  add_common(oracle);
  oracle->add_option("--dx", options.dx, "Coarsest cell width")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kInvalidSpec);
  }
  if (!spec_path.empty()) options.spec_path = spec_path;
  if (!solution_path.empty()) options.solution_path = solution_path;
  for (auto* cmd : {solve, verify, sweep, oracle}) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--x-max")) options.overrides.x_max = x_max;
    if (cmd->count("--tol")) options.overrides.tol = tol;
  }
  if (solve->parsed()) return run_solve(options, std::cout, std::cerr);
  if (verify->parsed()) return run_verify(options, std::cout, std::cerr);
  if (sweep->parsed()) return run_sweep(options, std::cout, std::cerr);
  return run_oracle(options, std::cout, std::cerr);
}
