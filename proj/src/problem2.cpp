#include "hyflow/problem2.hpp"

#include <cmath>
#include <memory>

#include "hyflow/error.hpp"
#include "hyflow/problem1.hpp"

namespace hyflow {

DeadGasSpec DeadGasSpec::with_pressure(double x_star, double p_bar) {
  DeadGasSpec spec;
  spec.x_star = x_star;
  spec.p_bar = p_bar;
  spec.rho = 1.0;
  if (p_bar == 0.0) {
    spec.gamma = 1.0;
    spec.E = 1.0;
  } else {
    spec.gamma = 1.4;
    spec.E = spec.gamma / (spec.gamma - 1.0) * p_bar / spec.rho;
  }
  return spec;
}

DeadGasSpec DeadGasSpec::with_state(double x_star, double rho, double E, double gamma) {
  DeadGasSpec spec;
  spec.x_star = x_star;
  spec.rho = rho;
  spec.E = E;
  spec.gamma = gamma;
  spec.p_bar = FlowState::from_state_relation(rho, 0.0, 0.0, E, gamma).p;
  return spec;
}

FlowState DeadGasSpec::static_state() const { return {rho, 0.0, 0.0, E, p_bar, gamma}; }

DeadGasRegime dead_gas_regime(double p_bar) {
  if (p_bar < 0.0) throw DomainError("static gas pressure must be >= 0");
  if (p_bar == 0.0) return DeadGasRegime::PZero;
  if (std::abs(p_bar - 1.0) < 1e-12) return DeadGasRegime::POne;
  return p_bar < 1.0 ? DeadGasRegime::PSubOne : DeadGasRegime::PSuperOne;
}

std::string to_string(DeadGasRegime regime) {
  switch (regime) {
    case DeadGasRegime::PZero: return "PZero";
    case DeadGasRegime::PSubOne: return "PSubOne";
    case DeadGasRegime::POne: return "POne";
    case DeadGasRegime::PSuperOne: return "PSuperOne";
  }
  return "";
}

LayerBalance dead_gas_balance(const Geometry& geometry, const DeadGasSpec& spec, double E0) {
  if (spec.p_bar < 0.0) throw DomainError("static gas pressure must be >= 0");
  if (!(spec.x_star > 0.0 && spec.x_star <= geometry.profile().x_end()))
    throw DomainError("x_star must lie in (0, x_end]");
  if (!(geometry.H(spec.x_star) > 0.0)) throw DomainError("H(x_star) must be positive");
  LayerBalance balance;
  balance.x0 = spec.x_star;
  balance.y0 = geometry.b(spec.x_star);
  balance.f0 = wall_layer_fluxes(geometry, spec.x_star, E0);
  balance.a = {0.0, 0.0, spec.p_bar, 0.0};
  balance.c = {1.0, 1.0 - spec.p_bar, 0.0, E0};
  return balance;
}

FreeLayer free_layer_closed_form(const Geometry& geometry, const DeadGasSpec& spec, double x_max,
                                 double E0) {
  const DeadGasRegime regime = dead_gas_regime(spec.p_bar);
  const LayerBalance balance = dead_gas_balance(geometry, spec, E0);
  if (regime == DeadGasRegime::PSuperOne)
    return closed_form_ellipse_layer(balance, to_string(regime));
  if (!(x_max > spec.x_star)) throw DomainError("x_max must exceed x_star");
  return closed_form_graph_layer(balance, x_max, to_string(regime));
}

FreeLayer free_layer_ode(const Geometry& geometry, const DeadGasSpec& spec, double x_max,
                         double tol, double E0, int n_nodes) {
  const DeadGasRegime regime = dead_gas_regime(spec.p_bar);
  const LayerBalance balance = dead_gas_balance(geometry, spec, E0);
  const double ode_tol = std::min(tol, 1e-10) * 1e-2;
  if (regime == DeadGasRegime::PSuperOne) {
    // Integration stops at the turning point; the bound only guards runaway input.
    const double bound = 1e4;
    return integrate_arclength_layer(balance, bound, ode_tol, to_string(regime));
  }
  if (!(x_max > spec.x_star)) throw DomainError("x_max must exceed x_star");
  return integrate_graph_layer(balance, x_max, ode_tol, n_nodes, to_string(regime));
}

LayerState layer_state_p2(const FreeLayer& layer, double t) { return layer.state(t); }

MeasureSolution solve_problem2(const RampProfile& profile, const DeadGasSpec& spec, double E0,
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
  const FreeLayer layer = free_layer_closed_form(*geometry, spec, x_max, E0);
  const double x_limit = layer.blow_up ? layer.x_end : x_max;
  const double b_star = geometry->b(x_star);

  MeasureSolution sol;
  sol.problem = "p2";
  sol.geometry = geometry;
  sol.E0 = E0;
  sol.x_star = x_star;
  sol.lower_state = spec.static_state();
  sol.x_limit = x_limit;
  if (profile.vertical_at_origin()) sol.singular_points.push_back({0.0, 0.0});

  auto height = layer.height;
  BulkRegion over_ramp{"upstream-ramp", 0.0, x_star,
                       [geometry](double x) { return geometry->b(x); },
                       [](double) { return kInfinity; }, "wall", "+inf",
                       FlowState::upstream(E0)};
  BulkRegion over_layer{"upstream-layer", x_star, x_limit, height,
                        [](double) { return kInfinity; }, "layer", "+inf",
                        FlowState::upstream(E0)};
  BulkRegion dead_gas{"dead-gas", x_star, x_limit, [](double) { return -kInfinity; }, height,
                      "-inf", "layer", spec.static_state()};
  sol.regions = {over_ramp, over_layer, dead_gas};
  sol.curves.push_back(wall_curve(geometry, x_star, E0));
  sol.curves.push_back(layer.curve("layer"));
  sol.loads.push_back(wall_load(geometry, x_star));
  sol.lines.push_back(
      BoundaryLine::inflow("upstream", 0.0, 0.0, kInfinity, FlowState::upstream(E0)));
  sol.lines.push_back(
      BoundaryLine::wall_pressure("cliff", x_star, -kInfinity, b_star, spec.p_bar));

  sol.classification.regime = layer.regime;
  sol.classification.asymptotic_slope = asymptotic_slope(layer.balance);
  if (layer.blow_up) {
    sol.classification.kind = "blow-up";
    sol.classification.blow_up = std::array<double, 2>{layer.blow_up->x, layer.blow_up->y};
    sol.singular_points.push_back({layer.blow_up->x, layer.blow_up->y});
  }
  return sol;
}

}  // namespace hyflow
