#include "hyflow/cli/commands.hpp"

#include <atomic>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "hyflow/cli/output.hpp"
#include "hyflow/cli/serialize.hpp"
#include "hyflow/error.hpp"
#include "hyflow/oracle.hpp"
#include "hyflow/problem1.hpp"
#include "hyflow/weak_verify.hpp"

namespace hyflow::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool wants(const std::string& format, const std::string& kind) {
  return format == "all" || format == kind;
}

void check_format(const std::string& format) {
  if (format != "all" && format != "csv" && format != "json" && format != "svg")
    throw SpecError("--format: expected csv, json, svg or all");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string base_dir_of(const std::string& path) {
  const auto dir = fs::path(path).parent_path();
  return dir.empty() ? "." : dir.string();
}

ProblemSpec spec_from_options(const CommandOptions& o) {
  if (!o.spec_path) throw SpecError("--spec is required");
  ProblemSpec spec = load_spec(*o.spec_path);
  apply_overrides(spec, o.overrides);
  return spec;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Maps library exceptions to exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SpecError& e) {
    err << "error: invalid spec: " << e.what() << "\n";
    return kInvalidSpec;
  } catch (const InadmissibleError& e) {
    err << "error: inadmissible ramp: " << e.what() << "\n";
    return kInadmissible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

std::optional<double> wall_end(const MeasureSolution& s) {
  const DiracCurve* wall = s.find_curve("wall");
  if (!wall) return std::nullopt;
  return wall->t_end;
}

// Parameter t of a curve with x(t) = x (x nondecreasing along the curve).
double parameter_at(const DiracCurve& c, double x) {
  double lo = c.t_begin, hi = c.t_end;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (c.sample(mid).x < x) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double free_layer_height(const MeasureSolution& solution, double x) {
  for (const auto& c : solution.curves) {
    if (c.name == "wall") continue;
    const double xa = c.sample(c.t_begin).x, xb = c.sample(c.t_end).x;
    if (x >= xa && x <= xb) return c.sample(parameter_at(c, x)).y;
  }
  return std::nan("");
}

GridAxis parse_grid_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw SpecError("--grid: expected KEY=LO:HI:STEP, got '" + text + "'");
  GridAxis axis;
  axis.key = text.substr(0, eq);
  axis.pointer = grid_key_pointer(axis.key);
  std::vector<double> parts;
  std::stringstream rest(text.substr(eq + 1));
  std::string item;
  while (std::getline(rest, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw SpecError("--grid: bad number '" + item + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw SpecError("--grid: expected KEY=LO:HI:STEP, got '" + text + "'");
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0)) throw SpecError("--grid: STEP must be positive");
  if (hi < lo) return axis;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (long i = 0; i < n; ++i) axis.values.push_back(lo + step * static_cast<double>(i));
  return axis;
}

int run_solve(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_format(o.format);
    const ProblemSpec spec = spec_from_options(o);
    const MeasureSolution sol = solve(spec);
    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);
    if (wants(o.format, "json"))
      write_text_file((dir / "solution.json").string(), dump(solution_to_json(sol, spec.samples)));
    if (wants(o.format, "csv"))
      write_text_file((dir / "curves.csv").string(), curves_csv(sol, spec.samples));
    if (wants(o.format, "svg"))
      write_text_file((dir / "plot.svg").string(), plot_svg(sol, spec.problem + " " + sol.classification.regime));
    out << "problem " << spec.problem << ": " << sol.classification.kind << " ("
        << sol.classification.regime << ")\n";
    if (sol.classification.collision)
      out << "collision at x = " << format_number((*sol.classification.collision)[0]) << "\n";
    if (sol.classification.blow_up) {
      out << "blow-up at (" << format_number((*sol.classification.blow_up)[0]) << ", "
          << format_number((*sol.classification.blow_up)[1]) << ")\n";
      return static_cast<int>(kBlowUp);
    }
    return static_cast<int>(kOk);
  });
}

VerifyOutcome verify_solution(const MeasureSolution& sol, int levels, bool tabulated, int threads) {
  if (levels < 3) throw SpecError("--levels: at least 3 levels are required");
  VerifyThresholds thresholds;
  double rn_tolerance = 1e-12;
  if (tabulated) {
    // Interpolated tables leave a small plateau instead of exact cancellation.
    thresholds.exact_floor = 1e-9;
    rn_tolerance = 1e-8;
  }
  VerifyOutcome result;
  json& summary = result.summary;
  summary["source"] = tabulated ? "solution" : "spec";
  summary["warnings"] = json::array();
  if (sol.empty()) {
    summary["warnings"].push_back("empty solution: every residual vanishes identically");
    summary["pass"] = true;
    result.pass = true;
    result.report = json{{"entries", json::array()}};
    return result;
  }
  const auto grid = standard_test_grid(sol);
  result.test_functions = static_cast<int>(grid.size());
  bool pass = !grid.empty();
  if (grid.empty()) summary["warnings"].push_back("no admissible test function");
  if (!grid.empty()) {
    const auto report = convergence_study(sol, grid, levels, threads);
    result.report = report_to_json(report, thresholds);
    pass = pass && report.passes(thresholds);
    summary["weak_form"] = result.report["summary"];
  }
  if (!sol.curves.empty()) {
    const auto rn = radon_nikodym_check(sol, 1000);
    summary["radon_nikodym"] = radon_nikodym_json(rn);
    summary["radon_nikodym"]["tolerance"] = rn_tolerance;
    const bool rn_ok = rn.curve_deviation <= rn_tolerance && rn.slip_deviation <= rn_tolerance &&
                       rn.pressure_deviation <= rn_tolerance;
    summary["radon_nikodym"]["pass"] = rn_ok;
    pass = pass && rn_ok;
  }
  summary["pass"] = pass;
  result.pass = pass;
  return result;
}

int run_verify(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.spec_path.has_value() == o.solution_path.has_value())
      throw SpecError("verify needs exactly one of --spec, --solution");
    const bool from_file = o.solution_path.has_value();
    const MeasureSolution sol =
        from_file ? solution_from_json(parse_json_text(read_file(*o.solution_path), *o.solution_path))
                  : solve(spec_from_options(o));
    const VerifyOutcome result = verify_solution(sol, o.levels, from_file, o.threads);
    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);
    write_text_file((dir / "report.json").string(), dump(result.report));
    write_text_file((dir / "summary.json").string(), dump(result.summary));
    if (sol.empty()) {
      err << "warning: empty solution, all residuals are 0\n";
      out << "PASS (empty solution)\n";
      return static_cast<int>(kOk);
    }
    out << (result.pass ? "PASS" : "FAIL") << ": " << result.test_functions
        << " test functions x 4 identities x " << o.levels << " levels\n";
    if (!result.pass && result.report.contains("fits")) {
      for (const auto& f : result.report["fits"])
        if (!f["pass"].get<bool>())
          out << "  " << f["identity"].get<std::string>() << " at (" << f["phi_center"][0] << ", "
              << f["phi_center"][1] << ") r=" << f["phi_radius"] << ": order "
              << f["fitted_order"] << ", finest " << f["finest_residual"] << "\n";
    }
    return static_cast<int>(result.pass ? kOk : kVerifyFailed);
  });
}

int run_sweep(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_format(o.format);
    if (!o.spec_path) throw SpecError("--spec is required");
    const json base = parse_json_text(read_file(*o.spec_path), *o.spec_path);
    const std::string base_dir = base_dir_of(*o.spec_path);
    spec_from_json(base, base_dir);  // template itself must be valid
    std::vector<GridAxis> axes;
    for (const auto& g : o.grid) axes.push_back(parse_grid_axis(g));
    for (const auto& axis : axes) {
      if (base.contains(json::json_pointer(axis.pointer))) continue;
      json probe = base;
      try {
        probe[json::json_pointer(axis.pointer)] = axis.values.empty() ? 0.0 : axis.values.front();
        spec_from_json(probe, base_dir);
      } catch (const UnknownFieldError& e) {
        throw SpecError("--grid " + axis.key + ": " + e.what());
      } catch (const json::exception& e) {
        throw SpecError("--grid " + axis.key + ": " + e.what());
      } catch (const SpecError&) {
        // Known key with an unusable value; reported per row.
      }
    }

    std::vector<std::vector<double>> points;
    if (!axes.empty()) {
      points.push_back({});
      for (const auto& axis : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& p : points)
          for (double v : axis.values) {
            auto q = p;
            q.push_back(v);
            next.push_back(std::move(q));
          }
        points = std::move(next);
      }
    }

    struct Row {
      std::string status = "ok";
      std::string message;
      std::optional<MeasureSolution> solution;
      std::optional<std::array<double, 2>> drag;
    };
    std::vector<Row> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < points.size(); i = next++) {
        Row& row = rows[i];
        try {
          json doc = base;
          for (std::size_t a = 0; a < axes.size(); ++a)
            doc[json::json_pointer(axes[a].pointer)] = points[i][a];
          ProblemSpec spec = spec_from_json(doc, base_dir);
          apply_overrides(spec, o.overrides);
          MeasureSolution sol = solve(spec);
          if (const auto x_end = wall_end(sol); x_end && sol.geometry && *x_end > 0.0)
            row.drag = drag_lift(*sol.geometry, 0.0, *x_end, spec.tol);
          row.solution = std::move(sol);
        } catch (const std::exception& e) {
          row.status = "error";
          row.message = e.what();
        }
      }
    };
    unsigned n = o.threads > 0 ? static_cast<unsigned>(o.threads) : std::thread::hardware_concurrency();
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1))));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv << "index";
    for (const auto& a : axes) csv << ',' << a.key;
    csv << ",status,kind,regime,blow_up_x,blow_up_y,collision_x,collision_y,asymptotic_slope,"
           "drag,lift,message\n";
    int failures = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& row = rows[i];
      csv << i;
      for (double v : points[i]) csv << ',' << format_number(v);
      csv << ',' << row.status;
      if (row.solution) {
        const auto& c = row.solution->classification;
        csv << ',' << c.kind << ',' << c.regime;
        csv << ',' << (c.blow_up ? format_number((*c.blow_up)[0]) : "") << ','
            << (c.blow_up ? format_number((*c.blow_up)[1]) : "");
        csv << ',' << (c.collision ? format_number((*c.collision)[0]) : "") << ','
            << (c.collision ? format_number((*c.collision)[1]) : "");
        csv << ',' << (c.asymptotic_slope ? format_number(*c.asymptotic_slope) : "");
      } else {
        ++failures;
        csv << ",,,,,,,";
      }
      csv << ',' << (row.drag ? format_number((*row.drag)[0]) : "") << ','
          << (row.drag ? format_number((*row.drag)[1]) : "");
      std::string msg = row.message;
      for (auto& ch : msg)
        if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
      csv << ',' << msg << '\n';
    }
    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);
    write_text_file((dir / "sweep.csv").string(), csv.str());
    if (o.format == "svg" || o.format == "all") {
      std::vector<std::pair<std::string, MeasureSolution>> overlay;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].solution) continue;
        std::string label;
        for (std::size_t a = 0; a < axes.size(); ++a)
          label += (a ? " " : "") + axes[a].key + "=" + short_number(points[i][a]);
        write_text_file((dir / ("row_" + std::to_string(i) + ".svg")).string(),
                        plot_svg(*rows[i].solution, label));
        overlay.emplace_back(label, *rows[i].solution);
      }
      write_text_file((dir / "overlay.svg").string(), overlay_svg(overlay));
    }
    out << rows.size() << " rows, " << failures << " failed\n";
    return static_cast<int>(kOk);
  });
}

int run_oracle(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(o.dx > 0.0)) throw SpecError("--dx: must be positive");
    const ProblemSpec spec = spec_from_options(o);
    const MeasureSolution sol = solve(spec);
    const Geometry& geometry = *sol.geometry;
    const std::array<double, 3> dxs = {o.dx, o.dx / 2, o.dx / 4};
    json summary;
    summary["problem"] = spec.problem;
    summary["dx"] = json::array({dxs[0], dxs[1], dxs[2]});
    fs::create_directories(o.out_dir);
    const fs::path dir(o.out_dir);

    const double x_wall = *wall_end(sol);
    std::vector<double> wp_err, mass_err;
    for (double dx : dxs) {
      const auto wall = accrete_wall(geometry, x_wall, dx, spec.E0);
      if (dx == dxs[0]) write_text_file((dir / "oracle_wall.csv").string(), accretion_csv(wall));
      const auto& last = wall.back();
      const double reference = newton_busemann_pressure(geometry, x_wall).value;
      wp_err.push_back(std::abs(last.w_p - reference));
      mass_err.push_back(std::abs(last.M - geometry.b(x_wall)));
    }
    summary["wall"] = {{"x", x_wall},
                       {"w_p_error", json::array({wp_err[0], wp_err[1], wp_err[2]})},
                       {"mass_error", json::array({mass_err[0], mass_err[1], mass_err[2]})}};
    if (wp_err[2] > 0.0)
      summary["wall"]["w_p_order"] = measured_order({dxs.begin(), dxs.end()}, wp_err);

    if (spec.problem != "p1") {
      const double x_star = *spec.x_star();
      double x_cmp = spec.effective_x_max();
      if (sol.classification.blow_up) x_cmp = x_star + 0.95 * ((*sol.classification.blow_up)[0] - x_star);
      Downstream downstream = spec.dead_gas ? Downstream(*spec.dead_gas) : Downstream(*spec.jet);
      std::vector<double> layer_err;
      std::optional<double> blow_up;
      for (double dx : dxs) {
        const auto layer = accrete_free_layer(geometry, downstream, dx, spec.effective_x_max(), spec.E0);
        if (dx == dxs[0]) {
          write_text_file((dir / "oracle_layer.csv").string(), accretion_csv(layer));
          blow_up = layer.blow_up_x;
        }
        layer_err.push_back(sup_deviation(
            layer, [&](double x) { return free_layer_height(sol, x); }, x_star, x_cmp));
      }
      summary["layer"] = {{"x_range", json::array({x_star, x_cmp})},
                          {"sup_error", json::array({layer_err[0], layer_err[1], layer_err[2]})},
                          {"blow_up_x", blow_up ? json(*blow_up) : json(nullptr)}};
      if (layer_err[2] > 0.0)
        summary["layer"]["order"] = measured_order({dxs.begin(), dxs.end()}, layer_err);
    }
    write_text_file((dir / "oracle.json").string(), dump(summary));
    out << dump(summary);
    return static_cast<int>(kOk);
  });
}

}  // namespace hyflow::cli
