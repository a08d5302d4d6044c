#include "hyflow/cli/spec.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hyflow/error.hpp"
#include "hyflow/problem1.hpp"

namespace hyflow::cli {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw SpecError(pointer + ": " + what);
}

double number_at(const json& doc, const std::string& key, const std::string& base) {
  const auto it = doc.find(key);
  if (it == doc.end()) schema_error(base + "/" + key, "required number is missing");
  if (!it->is_number()) schema_error(base + "/" + key, "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) schema_error(base + "/" + key, "expected a finite number");
  return v;
}

std::optional<double> optional_number(const json& doc, const std::string& key,
                                      const std::string& base) {
  if (!doc.contains(key)) return std::nullopt;
  return number_at(doc, key, base);
}

void check_keys(const json& doc, const std::set<std::string>& allowed, const std::string& base) {
  if (!doc.is_object()) schema_error(base.empty() ? "/" : base, "expected an object");
  for (const auto& [key, value] : doc.items())
    if (!allowed.count(key)) throw UnknownFieldError(base + "/" + key + ": unknown field");
}

std::vector<double> number_array(const json& doc, const std::string& key, const std::string& base) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_array()) schema_error(base + "/" + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) schema_error(base + "/" + key, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::optional<double> ProblemSpec::x_star() const {
  if (dead_gas) return dead_gas->x_star;
  if (jet) return jet->x_star;
  return std::nullopt;
}

double ProblemSpec::effective_x_max() const {
  if (x_max > 0.0) return x_max;
  if (problem == "p1") return 10.0;
  return 5.0 * *x_star();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string detail = e.what();
    const auto pos = detail.find("syntax error");
    if (pos != std::string::npos) detail = detail.substr(pos);
    throw SpecError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                    detail);
  }
}

RampProfile ramp_from_json(const json& ramp, const std::string& base_dir) {
  const std::string base = "/ramp";
  if (!ramp.is_object()) schema_error(base, "expected an object");
  if (!ramp.contains("kind") || !ramp["kind"].is_string())
    schema_error(base + "/kind", "expected one of wedge, power, polynomial, tabulated");
  const std::string kind = ramp["kind"];
  const double x_end = optional_number(ramp, "x_end", base).value_or(kInfinity);
  try {
    if (kind == "wedge") {
      check_keys(ramp, {"kind", "slope", "angle_deg", "x_end"}, base);
      const auto slope = optional_number(ramp, "slope", base);
      const auto angle = optional_number(ramp, "angle_deg", base);
      if (slope.has_value() == angle.has_value())
        schema_error(base, "wedge needs exactly one of slope, angle_deg");
      const double k = slope ? *slope : std::tan(*angle * M_PI / 180.0);
      return RampProfile::wedge(k, x_end);
    }
    if (kind == "power") {
      check_keys(ramp, {"kind", "coeff", "exp", "x_end"}, base);
      return RampProfile::power(number_at(ramp, "coeff", base), number_at(ramp, "exp", base), x_end);
    }
    if (kind == "polynomial") {
      check_keys(ramp, {"kind", "coeffs", "x_end"}, base);
      return RampProfile::polynomial(number_array(ramp, "coeffs", base), x_end);
    }
    if (kind == "tabulated") {
      check_keys(ramp, {"kind", "csv", "x", "b"}, base);
      if (ramp.contains("csv")) {
        if (!ramp["csv"].is_string()) schema_error(base + "/csv", "expected a path");
        std::filesystem::path path = ramp["csv"].get<std::string>();
        if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
        return RampProfile::tabulated_csv(path.string());
      }
      return RampProfile::tabulated(number_array(ramp, "x", base), number_array(ramp, "b", base));
    }
  } catch (const DomainError& e) {
    schema_error(base, e.what());
  }
  schema_error(base + "/kind", "expected one of wedge, power, polynomial, tabulated");
}

ProblemSpec spec_from_json(const json& doc, const std::string& base_dir) {
  check_keys(doc, {"problem", "ramp", "E0", "x_star", "p_bar", "dead_gas", "jet", "x_max", "tol",
                   "samples", "name"},
             "");
  ProblemSpec spec;
  spec.source = doc;
  if (!doc.contains("problem") || !doc["problem"].is_string())
    schema_error("/problem", "expected one of p1, p2, p3");
  spec.problem = doc["problem"];
  if (spec.problem != "p1" && spec.problem != "p2" && spec.problem != "p3")
    schema_error("/problem", "expected one of p1, p2, p3");
  if (!doc.contains("ramp")) schema_error("/ramp", "required object is missing");
  spec.ramp_json = doc["ramp"];
  spec.ramp = ramp_from_json(doc["ramp"], base_dir);
  spec.E0 = optional_number(doc, "E0", "").value_or(1.0);
  if (!(spec.E0 > 0.0)) schema_error("/E0", "must be positive");
  spec.x_max = optional_number(doc, "x_max", "").value_or(0.0);
  if (spec.x_max < 0.0) schema_error("/x_max", "must be positive");
  spec.tol = optional_number(doc, "tol", "").value_or(1e-10);
  if (!(spec.tol > 0.0)) schema_error("/tol", "must be positive");
  if (doc.contains("samples")) {
    if (!doc["samples"].is_number_integer() || doc["samples"].get<int>() < 5)
      schema_error("/samples", "expected an integer >= 5");
    spec.samples = doc["samples"];
  }

  const bool needs_star = spec.problem != "p1";
  if (!needs_star) {
    for (const char* key : {"x_star", "p_bar", "dead_gas", "jet"})
      if (doc.contains(key)) schema_error(std::string("/") + key, "not used by problem p1");
    return spec;
  }
  const double x_star = number_at(doc, "x_star", "");
  if (!(x_star > 0.0)) schema_error("/x_star", "must be positive");
  if (x_star > spec.ramp.x_end()) schema_error("/x_star", "lies beyond the ramp end");
  if (x_star < spec.ramp.x_begin()) schema_error("/x_star", "lies before the first ramp sample");
  if (spec.x_max > 0.0 && !(spec.x_max > x_star)) schema_error("/x_max", "must exceed x_star");

  if (spec.problem == "p2") {
    if (doc.contains("jet")) schema_error("/jet", "not used by problem p2");
    const bool has_p = doc.contains("p_bar"), has_state = doc.contains("dead_gas");
    if (has_p == has_state) schema_error("/p_bar", "problem p2 needs exactly one of p_bar, dead_gas");
    if (has_p) {
      const double p = number_at(doc, "p_bar", "");
      if (p < 0.0) schema_error("/p_bar", "must be nonnegative");
      spec.dead_gas = DeadGasSpec::with_pressure(x_star, p);
    } else {
      const json& g = doc["dead_gas"];
      check_keys(g, {"rho", "E", "gamma"}, "/dead_gas");
      const double rho = number_at(g, "rho", "/dead_gas");
      const double E = number_at(g, "E", "/dead_gas");
      const double gamma = optional_number(g, "gamma", "/dead_gas").value_or(1.4);
      if (!(rho > 0.0)) schema_error("/dead_gas/rho", "must be positive");
      if (!(E >= 0.0)) schema_error("/dead_gas/E", "must be nonnegative");
      if (!(gamma >= 1.0)) schema_error("/dead_gas/gamma", "must be at least 1");
      spec.dead_gas = DeadGasSpec::with_state(x_star, rho, E, gamma);
    }
  } else {
    for (const char* key : {"p_bar", "dead_gas"})
      if (doc.contains(key)) schema_error(std::string("/") + key, "not used by problem p3");
    if (!doc.contains("jet")) schema_error("/jet", "required object is missing");
    const json& j = doc["jet"];
    check_keys(j, {"rho", "u", "v", "E"}, "/jet");
    JetSpec jet;
    jet.x_star = x_star;
    jet.rho = optional_number(j, "rho", "/jet").value_or(1.0);
    jet.u = optional_number(j, "u", "/jet").value_or(1.0);
    jet.v = number_at(j, "v", "/jet");
    jet.E = optional_number(j, "E", "/jet").value_or(1.0);
    if (!(jet.rho > 0.0)) schema_error("/jet/rho", "must be positive");
    if (!(jet.u > 0.0)) schema_error("/jet/u", "must be positive");
    spec.jet = jet;
  }
  return spec;
}

ProblemSpec parse_spec(const std::string& text, const std::string& base_dir) {
  return spec_from_json(parse_json_text(text, "spec"), base_dir);
}

ProblemSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(path + ": cannot open spec file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return spec_from_json(parse_json_text(buffer.str(), path), dir.empty() ? "." : dir.string());
}

void apply_overrides(ProblemSpec& spec, const Overrides& overrides) {
  if (overrides.x_max) {
    if (!(*overrides.x_max > 0.0)) throw SpecError("--x-max: must be positive");
    if (spec.x_star() && !(*overrides.x_max > *spec.x_star()))
      throw SpecError("--x-max: must exceed x_star");
    spec.x_max = *overrides.x_max;
  }
  if (overrides.tol) {
    if (!(*overrides.tol > 0.0)) throw SpecError("--tol: must be positive");
    spec.tol = *overrides.tol;
  }
}

MeasureSolution solve(const ProblemSpec& spec) {
  const double x_max = spec.effective_x_max();
  if (spec.problem == "p1") {
    const double x_end = std::min(x_max, spec.ramp.x_end());
    return solve_problem1(spec.ramp, spec.E0, x_end, spec.tol);
  }
  if (spec.problem == "p2") return solve_problem2(spec.ramp, *spec.dead_gas, spec.E0, x_max, spec.tol);
  return solve_problem3(spec.ramp, *spec.jet, spec.E0, x_max, spec.tol);
}

std::string grid_key_pointer(const std::string& key) {
  static const std::map<std::string, std::string> aliases = {
      {"p_bar", "/p_bar"},   {"v_bar", "/jet/v"},       {"u_bar", "/jet/u"},
      {"rho_bar", "/jet/rho"}, {"E_bar", "/jet/E"},     {"slope", "/ramp/slope"},
      {"angle_deg", "/ramp/angle_deg"}, {"E0", "/E0"},  {"x_star", "/x_star"},
      {"x_max", "/x_max"},   {"coeff", "/ramp/coeff"},  {"exp", "/ramp/exp"}};
  if (const auto it = aliases.find(key); it != aliases.end()) return it->second;
  if (!key.empty() && key.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789.") == std::string::npos) {
    std::string pointer = "/" + key;
    for (auto& ch : pointer)
      if (ch == '.') ch = '/';
    return pointer;
  }
  throw SpecError("--grid: unknown key '" + key + "'");
}

}  // namespace hyflow::cli
