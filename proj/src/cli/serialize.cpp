#include "hyflow/cli/serialize.hpp"

#include <cmath>
#include <map>

#include "hyflow/error.hpp"
#include "hyflow/interpolation.hpp"

namespace hyflow::cli {

using nlohmann::json;

namespace {

json point_json(const std::array<double, 2>& p) { return json::array({p[0], p[1]}); }

std::array<double, 2> point_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw SpecError(where + ": expected [x, y]");
  return {number_from_json(j[0], where), number_from_json(j[1], where)};
}

json state_json(const FlowState& s) {
  return {{"rho", s.rho}, {"u", s.u}, {"v", s.v}, {"E", s.E}, {"p", s.p}, {"gamma", s.gamma}};
}

FlowState state_from_json(const json& j, const std::string& where) {
  FlowState s;
  s.rho = number_from_json(j.at("rho"), where);
  s.u = number_from_json(j.at("u"), where);
  s.v = number_from_json(j.at("v"), where);
  s.E = number_from_json(j.at("E"), where);
  s.p = number_from_json(j.at("p"), where);
  s.gamma = number_from_json(j.at("gamma"), where);
  return s;
}

std::vector<double> column(const json& samples, const std::string& key, const std::string& where) {
  if (!samples.contains(key) || !samples[key].is_array())
    throw SpecError(where + ": missing column '" + key + "'");
  std::vector<double> out;
  out.reserve(samples[key].size());
  for (const auto& v : samples[key]) out.push_back(number_from_json(v, where + "/" + key));
  return out;
}

const char* kCurveColumns[] = {"x",    "y",    "dx",   "dy",   "w_m0", "w_m1", "w_m2", "w_m3",
                               "w_n0", "w_n1", "w_n2", "w_n3", "w_rho", "u",   "v",    "E"};
const char* kLoadColumns[] = {"x", "y", "dx", "dy", "w_p", "normal_x", "normal_y"};

struct ColumnTables {
  std::vector<HermiteTable> tables;
  double operator()(std::size_t i, double t) const { return tables[i](t); }
};

std::shared_ptr<ColumnTables> build_tables(const json& samples, const std::vector<double>& ts,
                                           const char* const* names, std::size_t count,
                                           const std::string& where) {
  auto out = std::make_shared<ColumnTables>();
  for (std::size_t i = 0; i < count; ++i) {
    auto values = column(samples, names[i], where);
    if (values.size() != ts.size()) throw SpecError(where + ": column lengths differ");
    out->tables.push_back(HermiteTable::from_samples(ts, std::move(values)));
  }
  return out;
}

std::vector<double> parameters(const json& samples, const std::string& where) {
  auto ts = column(samples, "t", where);
  if (ts.size() < 5) throw SpecError(where + ": at least 5 samples are required");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1])) throw SpecError(where + ": parameters must increase strictly");
  return ts;
}

bool is_singular_start(const MeasureSolution& solution, const std::array<double, 2>& p) {
  for (const auto& s : solution.singular_points)
    if (std::abs(s[0] - p[0]) < 1e-12 && std::abs(s[1] - p[1]) < 1e-12) return true;
  return false;
}

}  // namespace

json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    if (v == "inf") return kInfinity;
    if (v == "-inf") return -kInfinity;
  }
  if (v.is_null()) return std::nan("");
  throw SpecError(where + ": expected a number");
}

std::vector<double> export_parameters(const MeasureSolution& solution, double t_begin, double t_end,
                                      const std::array<double, 2>& start, int samples) {
  const bool graded = is_singular_start(solution, start);
  std::vector<double> ts(samples);
  for (int i = 0; i < samples; ++i) {
    double s = static_cast<double>(i) / (samples - 1);
    if (graded) s *= s;
    ts[i] = t_begin + (t_end - t_begin) * s;
  }
  ts.back() = t_end;
  return ts;
}

json classification_json(const Classification& c) {
  json out = {{"kind", c.kind}, {"regime", c.regime}};
  out["blow_up"] = c.blow_up ? point_json(*c.blow_up) : json(nullptr);
  out["collision"] = c.collision ? point_json(*c.collision) : json(nullptr);
  out["asymptotic_slope"] = c.asymptotic_slope ? number_json(*c.asymptotic_slope) : json(nullptr);
  return out;
}

json solution_to_json(const MeasureSolution& solution, int samples) {
  if (samples < 5) throw DomainError("at least 5 samples per curve are required");
  json doc;
  doc["problem"] = solution.problem;
  doc["classification"] = classification_json(solution.classification);
  doc["x_limit"] = number_json(solution.x_limit);
  doc["E0"] = solution.E0;
  doc["x_star"] = solution.x_star ? json(*solution.x_star) : json(nullptr);
  doc["singular_points"] = json::array();
  for (const auto& p : solution.singular_points) doc["singular_points"].push_back(point_json(p));

  doc["regions"] = json::array();
  for (const auto& r : solution.regions)
    doc["regions"].push_back({{"name", r.name},
                              {"x_lo", number_json(r.x_lo)},
                              {"x_hi", number_json(r.x_hi)},
                              {"lower", r.lower_label},
                              {"upper", r.upper_label},
                              {"state", state_json(r.state)}});

  doc["curves"] = json::array();
  for (const auto& c : solution.curves) {
    const CurveSample first = c.sample(c.t_begin);
    const auto ts = export_parameters(solution, c.t_begin, c.t_end, {first.x, first.y}, samples);
    std::map<std::string, json> cols;
    for (const char* name : kCurveColumns) cols[name] = json::array();
    json t_col = json::array();
    for (double t : ts) {
      const CurveSample s = c.sample(t);
      t_col.push_back(t);
      const double values[] = {s.x,      s.y,      s.dx,     s.dy,     s.w_m[0], s.w_m[1],
                               s.w_m[2], s.w_m[3], s.w_n[0], s.w_n[1], s.w_n[2], s.w_n[3],
                               s.w_rho,  s.u,      s.v,      s.E};
      for (std::size_t i = 0; i < std::size(kCurveColumns); ++i)
        cols[kCurveColumns[i]].push_back(number_json(values[i]));
    }
    json sample_doc = {{"t", t_col}};
    for (auto& [k, v] : cols) sample_doc[k] = std::move(v);
    doc["curves"].push_back({{"name", c.name}, {"samples", std::move(sample_doc)}});
  }

  doc["loads"] = json::array();
  for (const auto& l : solution.loads) {
    const PressureSample first = l.sample(l.t_begin);
    const auto ts = export_parameters(solution, l.t_begin, l.t_end, {first.x, first.y}, samples);
    std::map<std::string, json> cols;
    for (const char* name : kLoadColumns) cols[name] = json::array();
    json t_col = json::array();
    for (double t : ts) {
      const PressureSample s = l.sample(t);
      t_col.push_back(t);
      const double values[] = {s.x, s.y, s.dx, s.dy, s.w_p, s.normal[0], s.normal[1]};
      for (std::size_t i = 0; i < std::size(kLoadColumns); ++i)
        cols[kLoadColumns[i]].push_back(number_json(values[i]));
    }
    json sample_doc = {{"t", t_col}};
    for (auto& [k, v] : cols) sample_doc[k] = std::move(v);
    doc["loads"].push_back({{"name", l.name}, {"samples", std::move(sample_doc)}});
  }

  doc["lines"] = json::array();
  for (const auto& l : solution.lines) {
    json flux = json::array();
    for (double f : l.flux) flux.push_back(f);
    doc["lines"].push_back({{"name", l.name},
                            {"kind", l.kind},
                            {"x", l.x},
                            {"y_lo", number_json(l.y_lo)},
                            {"y_hi", number_json(l.y_hi)},
                            {"flux", flux},
                            {"pressure", l.pressure},
                            {"state", l.state ? state_json(*l.state) : json(nullptr)}});
  }

  doc["contacts"] = json::array();
  for (const auto& c : solution.contacts)
    doc["contacts"].push_back(
        {{"x0", c.x0}, {"y0", c.y0}, {"slope", c.slope}, {"x_end", number_json(c.x_end)}});
  return doc;
}

MeasureSolution solution_from_json(const json& doc) {
  if (!doc.is_object()) throw SpecError("/: expected a solution object");
  MeasureSolution sol;
  sol.problem = doc.value("problem", std::string());
  if (doc.contains("x_limit")) sol.x_limit = number_from_json(doc["x_limit"], "/x_limit");
  if (std::isnan(sol.x_limit)) sol.x_limit = kInfinity;
  if (doc.contains("E0")) sol.E0 = number_from_json(doc["E0"], "/E0");
  if (doc.contains("x_star") && !doc["x_star"].is_null())
    sol.x_star = number_from_json(doc["x_star"], "/x_star");
  for (const auto& p : doc.value("singular_points", json::array()))
    sol.singular_points.push_back(point_from_json(p, "/singular_points"));
  if (doc.contains("classification")) {
    const json& c = doc["classification"];
    sol.classification.kind = c.value("kind", std::string("regular"));
    sol.classification.regime = c.value("regime", std::string());
    if (c.contains("blow_up") && !c["blow_up"].is_null())
      sol.classification.blow_up = point_from_json(c["blow_up"], "/classification/blow_up");
    if (c.contains("collision") && !c["collision"].is_null())
      sol.classification.collision = point_from_json(c["collision"], "/classification/collision");
    if (c.contains("asymptotic_slope") && !c["asymptotic_slope"].is_null())
      sol.classification.asymptotic_slope =
          number_from_json(c["asymptotic_slope"], "/classification/asymptotic_slope");
  }

  std::map<std::string, std::function<double(double)>> bounds;
  bounds["+inf"] = [](double) { return kInfinity; };
  bounds["-inf"] = [](double) { return -kInfinity; };

  int index = 0;
  for (const auto& c : doc.value("curves", json::array())) {
    const std::string where = "/curves/" + std::to_string(index++);
    DiracCurve curve;
    curve.name = c.value("name", std::string("curve"));
    const json& samples = c.at("samples");
    const auto ts = parameters(samples, where);
    auto tables = build_tables(samples, ts, kCurveColumns, std::size(kCurveColumns), where);
    curve.t_begin = ts.front();
    curve.t_end = ts.back();
    curve.sample = [tables](double t) {
      CurveSample s;
      const auto& f = *tables;
      s.x = f(0, t);
      s.y = f(1, t);
      s.dx = f(2, t);
      s.dy = f(3, t);
      for (int k = 0; k < 4; ++k) {
        s.w_m[k] = f(4 + k, t);
        s.w_n[k] = f(8 + k, t);
      }
      s.w_rho = f(12, t);
      s.u = f(13, t);
      s.v = f(14, t);
      s.E = f(15, t);
      return s;
    };
    // Height as a function of x for region bounds.
    auto xs = column(samples, "x", where);
    auto ys = column(samples, "y", where);
    bool increasing = true;
    for (std::size_t i = 1; i < xs.size(); ++i) increasing = increasing && xs[i] > xs[i - 1];
    if (increasing) {
      auto graph = std::make_shared<HermiteTable>(HermiteTable::from_samples(xs, ys));
      bounds[curve.name] = [graph](double x) { return (*graph)(x); };
    }
    sol.curves.push_back(std::move(curve));
  }

  index = 0;
  for (const auto& l : doc.value("loads", json::array())) {
    const std::string where = "/loads/" + std::to_string(index++);
    WallLoad load;
    load.name = l.value("name", std::string("load"));
    const json& samples = l.at("samples");
    const auto ts = parameters(samples, where);
    auto tables = build_tables(samples, ts, kLoadColumns, std::size(kLoadColumns), where);
    load.t_begin = ts.front();
    load.t_end = ts.back();
    load.sample = [tables](double t) {
      const auto& f = *tables;
      PressureSample s;
      s.x = f(0, t);
      s.y = f(1, t);
      s.dx = f(2, t);
      s.dy = f(3, t);
      s.w_p = f(4, t);
      const double nx = f(5, t), ny = f(6, t), norm = std::hypot(nx, ny);
      s.normal = {nx / norm, ny / norm};
      return s;
    };
    sol.loads.push_back(std::move(load));
  }

  index = 0;
  for (const auto& l : doc.value("lines", json::array())) {
    const std::string where = "/lines/" + std::to_string(index++);
    BoundaryLine line;
    line.name = l.value("name", std::string("line"));
    line.kind = l.value("kind", std::string("inflow"));
    line.x = number_from_json(l.at("x"), where + "/x");
    line.y_lo = number_from_json(l.at("y_lo"), where + "/y_lo");
    line.y_hi = number_from_json(l.at("y_hi"), where + "/y_hi");
    const json& flux = l.at("flux");
    if (!flux.is_array() || flux.size() != 4) throw SpecError(where + "/flux: expected 4 numbers");
    for (int k = 0; k < 4; ++k) line.flux[k] = number_from_json(flux[k], where + "/flux");
    line.pressure = l.contains("pressure") ? number_from_json(l["pressure"], where) : 0.0;
    if (l.contains("state") && !l["state"].is_null()) line.state = state_from_json(l["state"], where);
    sol.lines.push_back(std::move(line));
  }

  for (const auto& c : doc.value("contacts", json::array())) {
    ContactLine contact{number_from_json(c.at("x0"), "/contacts"),
                        number_from_json(c.at("y0"), "/contacts"),
                        number_from_json(c.at("slope"), "/contacts"),
                        number_from_json(c.at("x_end"), "/contacts")};
    sol.contacts.push_back(contact);
  }
  if (!sol.contacts.empty()) {
    const ContactLine c = sol.contacts.front();
    bounds["contact"] = [c](double x) { return c.y0 + c.slope * (x - c.x0); };
  }

  index = 0;
  for (const auto& r : doc.value("regions", json::array())) {
    const std::string where = "/regions/" + std::to_string(index++);
    BulkRegion region;
    region.name = r.value("name", std::string("region"));
    region.x_lo = number_from_json(r.at("x_lo"), where + "/x_lo");
    region.x_hi = number_from_json(r.at("x_hi"), where + "/x_hi");
    region.lower_label = r.at("lower").get<std::string>();
    region.upper_label = r.at("upper").get<std::string>();
    const auto lo = bounds.find(region.lower_label), hi = bounds.find(region.upper_label);
    if (lo == bounds.end()) throw SpecError(where + "/lower: unknown boundary '" + region.lower_label + "'");
    if (hi == bounds.end()) throw SpecError(where + "/upper: unknown boundary '" + region.upper_label + "'");
    region.lower = lo->second;
    region.upper = hi->second;
    region.state = state_from_json(r.at("state"), where + "/state");
    sol.regions.push_back(std::move(region));
  }
  return sol;
}

json report_to_json(const WeakResidualReport& report, const VerifyThresholds& thresholds) {
  json entries = json::array();
  std::size_t fit_index = 0;
  for (const auto& e : report.entries) {
    // entries are grouped per (phi, identity) in fit order, levels contiguous
    const auto& fit = report.fits[fit_index];
    entries.push_back({{"identity", to_string(e.identity)},
                       {"phi_center", json::array({e.phi.cx, e.phi.cy})},
                       {"phi_radius", e.phi.radius},
                       {"level", e.level},
                       {"h", e.h},
                       {"residual", e.residual},
                       {"scale", e.scale},
                       {"fitted_order", fit.order ? json(*fit.order) : json(nullptr)}});
    if (e.level + 1 == report.levels) ++fit_index;
  }
  json fits = json::array();
  double worst_order = kInfinity, worst_finest = 0.0;
  int failures = 0;
  for (const auto& f : report.fits) {
    const bool pass = report.fit_passes(f, thresholds);
    failures += pass ? 0 : 1;
    if (f.order) worst_order = std::min(worst_order, *f.order);
    worst_finest = std::max(worst_finest, f.finest);
    fits.push_back({{"identity", to_string(f.identity)},
                    {"phi_center", json::array({f.phi.cx, f.phi.cy})},
                    {"phi_radius", f.phi.radius},
                    {"fitted_order", f.order ? json(*f.order) : json(nullptr)},
                    {"finest_residual", f.finest},
                    {"scale", f.scale},
                    {"at_rounding", f.at_rounding},
                    {"pass", pass}});
  }
  return {{"levels", report.levels},
          {"x_limit", number_json(report.x_limit)},
          {"truncation", "test-function supports lie strictly inside x < x_limit"},
          {"thresholds", {{"min_order", thresholds.min_order}, {"max_finest", thresholds.max_finest}}},
          {"summary",
           {{"test_functions", report.fits.size() / 4},
            {"failures", failures},
            {"min_fitted_order", report.fits.empty() ? json(nullptr) : number_json(worst_order)},
            {"max_finest_residual", worst_finest},
            {"pass", report.passes(thresholds)}}},
          {"fits", fits},
          {"entries", entries}};
}

json radon_nikodym_json(const RadonNikodymReport& r) {
  return {{"curve_deviation", r.curve_deviation},
          {"slip_deviation", r.slip_deviation},
          {"pressure_deviation", r.pressure_deviation},
          {"checked", r.checked},
          {"skipped", r.skipped}};
}

}  // namespace hyflow::cli
