#include "hyflow/problem3.hpp"

#include <cmath>
#include <memory>

#include "hyflow/error.hpp"
#include "hyflow/problem1.hpp"

namespace hyflow {
namespace {

void require_jet(const Geometry& geometry, const JetSpec& spec) {
  if (!(spec.u > 0.0)) throw DomainError("jet velocity u must be positive");
  if (!(spec.rho > 0.0)) throw DomainError("jet density must be positive");
  if (!(spec.x_star > 0.0 && spec.x_star <= geometry.profile().x_end()))
    throw DomainError("x_star must lie in (0, x_end]");
  if (!(geometry.H(spec.x_star) > 0.0)) throw DomainError("H(x_star) must be positive");
}

// Layer above the vacuum: only the upstream stream is captured.
LayerBalance vacuum_balance(const Geometry& geometry, const JetSpec& spec, double E0) {
  LayerBalance balance;
  balance.x0 = spec.x_star;
  balance.y0 = geometry.b(spec.x_star);
  balance.f0 = wall_layer_fluxes(geometry, spec.x_star, E0);
  balance.a = {0.0, 0.0, 0.0, 0.0};
  balance.c = {1.0, 1.0, 0.0, E0};
  return balance;
}

std::string jet_layer_regime(const JetSpec& spec) {
  return std::abs(1.0 - spec.rho * spec.u * spec.u) < 1e-12 ? "Rational" : "Radical";
}

LayerBalance post_collision_balance(const Geometry& geometry, const JetSpec& spec,
                                    const Collision& collision, double E0) {
  const LayerBalance upper = vacuum_balance(geometry, spec, E0);
  const double h = closed_form_graph_layer(upper, collision.x, "Vacuum").height(collision.x);
  if (!(collision.x > spec.x_star) ||
      std::abs(h - collision.y) > 1e-9 * std::max(1.0, std::abs(h)))
    throw DomainError("collision point does not lie on the free layer above the vacuum");
  return jet_balance(spec, E0, collision.x, collision.y, upper.fluxes(collision.x, collision.y));
}

}  // namespace

std::string to_string(JetRegime regime) {
  switch (regime) {
    case JetRegime::Attached: return "Attached";
    case JetRegime::VacuumUnbounded: return "VacuumUnbounded";
    case JetRegime::VacuumBounded: return "VacuumBounded";
  }
  return "";
}

JetRegime classify_regime(const Geometry& geometry, const JetSpec& spec) {
  require_jet(geometry, spec);
  const double wall_slope = geometry.at(spec.x_star).db;
  if (spec.v / spec.u >= wall_slope) return JetRegime::Attached;
  if (spec.v <= 0.0) return JetRegime::VacuumUnbounded;
  return JetRegime::VacuumBounded;
}

LayerBalance jet_balance(const JetSpec& spec, double E0, double x0, double y0,
                         const std::array<double, 4>& f0) {
  const double r = spec.rho, u = spec.u, v = spec.v, E = spec.E;
  LayerBalance balance;
  balance.x0 = x0;
  balance.y0 = y0;
  balance.f0 = f0;
  balance.a = {r * v, r * u * v, r * v * v, r * v * E};
  balance.c = {1.0 - r * u, 1.0 - r * u * u, -r * u * v, E0 - r * u * E};
  return balance;
}

EntropyReport check_entropy(const FreeLayer& layer, const JetSpec& spec, int n_samples,
                            double slack) {
  EntropyReport report;
  const double jet_slope = spec.v / spec.u;
  for (int i = 0; i < n_samples; ++i) {
    const double t =
        n_samples == 1 ? layer.t_begin
                       : layer.t_begin + (layer.t_end - layer.t_begin) * i / (n_samples - 1);
    const auto p = layer.point(t);
    const auto F = layer.balance.fluxes(p[0], p[1]);
    const double slope = F[2] / F[1];
    report.min_slope = std::min(report.min_slope, slope);
    report.max_slope = std::max(report.max_slope, slope);
    report.min_mass_flux = std::min(report.min_mass_flux, F[0]);
    const bool ok = slope >= -slack && slope <= jet_slope + slack && F[0] > 0.0 && F[1] > 0.0;
    if (!ok && report.satisfied) {
      report.satisfied = false;
      report.first_violation = p[0];
    }
  }
  return report;
}

FreeLayer attached_layer(const Geometry& geometry, const JetSpec& spec, double x_max, double E0,
                         int n_check) {
  if (classify_regime(geometry, spec) != JetRegime::Attached)
    throw DomainError("attached_layer requires v/u >= b'(x_star)");
  if (!(x_max > spec.x_star)) throw DomainError("x_max must exceed x_star");
  const LayerBalance balance = jet_balance(spec, E0, spec.x_star, geometry.b(spec.x_star),
                                           wall_layer_fluxes(geometry, spec.x_star, E0));
  FreeLayer layer = closed_form_graph_layer(balance, x_max, jet_layer_regime(spec));
  const EntropyReport report = check_entropy(layer, spec, n_check);
  if (!report.satisfied)
    throw EntropyViolation("entropy or positivity violated at x = " +
                               std::to_string(*report.first_violation),
                           *report.first_violation);
  return layer;
}

FreeLayer attached_layer_ode(const Geometry& geometry, const JetSpec& spec, double x_max,
                             double tol, double E0, int n_nodes) {
  if (classify_regime(geometry, spec) != JetRegime::Attached)
    throw DomainError("attached_layer_ode requires v/u >= b'(x_star)");
  const LayerBalance balance = jet_balance(spec, E0, spec.x_star, geometry.b(spec.x_star),
                                           wall_layer_fluxes(geometry, spec.x_star, E0));
  return integrate_graph_layer(balance, x_max, std::min(tol, 1e-10) * 1e-2, n_nodes,
                               jet_layer_regime(spec));
}

VacuumRegion vacuum_construction(const Geometry& geometry, const JetSpec& spec, double x_max,
                                 double E0) {
  const JetRegime regime = classify_regime(geometry, spec);
  if (regime == JetRegime::Attached)
    throw DomainError("vacuum_construction called in the attached regime");
  const LayerBalance balance = vacuum_balance(geometry, spec, E0);
  const double b_slope = geometry.at(spec.x_star).db;
  const double beta = balance.f0[1];

  VacuumRegion region;
  region.contact_x0 = spec.x_star;
  region.contact_y0 = balance.y0;
  region.contact_slope = spec.v / spec.u;
  double x_end = x_max;
  if (regime == JetRegime::VacuumBounded) {
    const double lag = spec.u * b_slope - spec.v;
    Collision c;
    c.x = spec.x_star + 2.0 * lag * spec.u / (spec.v * spec.v) * beta;
    c.y = balance.y0 + 2.0 * lag / spec.v * beta;
    c.slope = b_slope * spec.v / (2.0 * spec.u * b_slope - spec.v);
    region.collision = c;
    x_end = std::min(x_max, c.x);
  }
  region.upper = closed_form_graph_layer(balance, x_end, "Vacuum");
  return region;
}

FreeLayer continue_after_collision(const Geometry& geometry, const JetSpec& spec,
                                   const Collision& collision, double x_max, double E0) {
  if (classify_regime(geometry, spec) != JetRegime::VacuumBounded)
    throw DomainError("continue_after_collision requires the bounded-vacuum regime");
  if (!(x_max > collision.x)) throw DomainError("x_max must exceed the collision point");
  const LayerBalance balance = post_collision_balance(geometry, spec, collision, E0);
  return closed_form_graph_layer(balance, x_max, jet_layer_regime(spec));
}

FreeLayer continue_after_collision_ode(const Geometry& geometry, const JetSpec& spec,
                                       const Collision& collision, double x_max, double tol,
                                       double E0, int n_nodes) {
  if (classify_regime(geometry, spec) != JetRegime::VacuumBounded)
    throw DomainError("continue_after_collision requires the bounded-vacuum regime");
  const LayerBalance balance = post_collision_balance(geometry, spec, collision, E0);
  return integrate_graph_layer(balance, x_max, std::min(tol, 1e-10) * 1e-2, n_nodes,
                               jet_layer_regime(spec));
}

MeasureSolution solve_problem3(const RampProfile& profile, const JetSpec& spec, double E0,
                               double x_max, double tol, int admissibility_samples) {
  const double x_star = spec.x_star;
  if (!(x_star > 0.0 && x_star <= profile.x_end()))
    throw DomainError("x_star must lie in (0, x_end]");
  if (x_max <= 0.0) x_max = 5.0 * x_star;
  const auto report = check_admissibility(profile, 0.0, x_star, admissibility_samples, tol);
  if (!report.admissible)
    throw InadmissibleError("ramp is inadmissible at x = " + std::to_string(*report.first_failure),
                            *report.first_failure);
  auto geometry = std::make_shared<const Geometry>(profile, tol);
  const JetRegime regime = classify_regime(*geometry, spec);
  const double b_star = geometry->b(x_star);
  const FlowState upstream = FlowState::upstream(E0);
  const FlowState jet = spec.state();
  auto plus_inf = [](double) { return kInfinity; };
  auto minus_inf = [](double) { return -kInfinity; };

  MeasureSolution sol;
  sol.problem = "p3";
  sol.geometry = geometry;
  sol.E0 = E0;
  sol.x_star = x_star;
  sol.lower_state = jet;
  sol.x_limit = x_max;
  if (profile.vertical_at_origin()) sol.singular_points.push_back({0.0, 0.0});
  sol.regions.push_back({"upstream-ramp", 0.0, x_star,
                         [geometry](double x) { return geometry->b(x); }, plus_inf, "wall",
                         "+inf", upstream});
  sol.curves.push_back(wall_curve(geometry, x_star, E0));
  sol.loads.push_back(wall_load(geometry, x_star));
  sol.lines.push_back(BoundaryLine::inflow("upstream", 0.0, 0.0, kInfinity, upstream));
  sol.lines.push_back(BoundaryLine::inflow("jet", x_star, -kInfinity, b_star, jet));
  sol.classification.regime = to_string(regime);

  auto add_layer_regions = [&](const FreeLayer& layer, double x_lo, double x_hi) {
    sol.regions.push_back({"upstream-layer", x_lo, x_hi, layer.height, plus_inf, "layer", "+inf",
                           upstream});
    sol.regions.push_back({"jet", x_lo, x_hi, minus_inf, layer.height, "-inf", "layer", jet});
  };

  if (regime == JetRegime::Attached) {
    const FreeLayer layer = attached_layer(*geometry, spec, x_max, E0);
    add_layer_regions(layer, x_star, x_max);
    sol.curves.push_back(layer.curve("layer"));
    sol.classification.kind = "regular";
    sol.classification.asymptotic_slope = asymptotic_slope(layer.balance);
    return sol;
  }

  const VacuumRegion vac = vacuum_construction(*geometry, spec, x_max, E0);
  const double x_vac = vac.upper.x_end;
  auto contact = [vac](double x) { return vac.contact(x); };
  sol.regions.push_back({"upstream-vacuum-layer", x_star, x_vac, vac.upper.height, plus_inf,
                         "vacuum-layer", "+inf", upstream});
  sol.regions.push_back({"vacuum", x_star, x_vac, contact, vac.upper.height, "contact",
                         "vacuum-layer", FlowState::vacuum()});
  sol.regions.push_back({"jet-below-contact", x_star, x_vac, minus_inf, contact, "-inf",
                         "contact", jet});
  sol.curves.push_back(vac.upper.curve("vacuum-layer"));
  sol.contacts.push_back({x_star, b_star, vac.contact_slope, x_vac});
  sol.classification.kind = "vacuum";
  sol.classification.asymptotic_slope = asymptotic_slope(vac.upper.balance);
  if (vac.collision) {
    sol.classification.collision = std::array<double, 2>{vac.collision->x, vac.collision->y};
    if (vac.collision->x < x_max) {
      const FreeLayer layer = continue_after_collision(*geometry, spec, *vac.collision, x_max, E0);
      add_layer_regions(layer, vac.collision->x, x_max);
      sol.curves.push_back(layer.curve("layer"));
      sol.classification.asymptotic_slope = asymptotic_slope(layer.balance);
    }
  }
  return sol;
}

SingularRiemannData export_singular_riemann(const MeasureSolution& solution, double x_star) {
  if (!solution.geometry) throw DomainError("export_singular_riemann: solution has no geometry");
  SingularRiemannData data;
  data.x_star = x_star;
  data.y_star = solution.geometry->b(x_star);
  data.upper_state = FlowState::upstream(solution.E0);
  data.lower_state = solution.lower_state;
  const double H = solution.geometry->H(x_star);
  if (data.y_star > 0.0 && H > 0.0) {
    const LayerState s = layer_state(*solution.geometry, x_star, solution.E0);
    data.point_mass = PointMass{data.y_star, data.y_star * data.y_star / H, s.u, s.v, s.E};
  }
  return data;
}

}  // namespace hyflow
