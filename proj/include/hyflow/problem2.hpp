#pragma once

#include <string>

#include "hyflow/geometry.hpp"
#include "hyflow/layer.hpp"
#include "hyflow/measure.hpp"

namespace hyflow {

// Static gas behind the cliff x = x_star.
struct DeadGasSpec {
  double x_star = 0.0;
  double p_bar = 0.0;
  double rho = 1.0;
  double E = 1.0;
  double gamma = 1.4;

  // Pressure given directly; rho = 1 and E follows from the state relation
  // (gamma = 1 and E = 1 for a pressureless gas).
  static DeadGasSpec with_pressure(double x_star, double p_bar);
  // Pressure derived as ((gamma-1)/gamma) rho E.
  static DeadGasSpec with_state(double x_star, double rho, double E, double gamma = 1.4);
  FlowState static_state() const;
};

enum class DeadGasRegime { PZero, PSubOne, POne, PSuperOne };

// |p - 1| < 1e-12 selects POne.
DeadGasRegime dead_gas_regime(double p_bar);
std::string to_string(DeadGasRegime regime);

// Layer balance behind the cliff: captured stream from above, static pressure from below.
LayerBalance dead_gas_balance(const Geometry& geometry, const DeadGasSpec& spec, double E0 = 1.0);

// Closed-form free layer. Graph on [x_star, x_max] for p <= 1; for p > 1 the lower
// branch of the ellipse up to its rightmost point (x_max ignored).
FreeLayer free_layer_closed_form(const Geometry& geometry, const DeadGasSpec& spec, double x_max,
                                 double E0 = 1.0);

// Same layer by adaptive Runge-Kutta integration of the tangency ODE; arc-length
// parametrized for p > 1.
FreeLayer free_layer_ode(const Geometry& geometry, const DeadGasSpec& spec, double x_max,
                         double tol = 1e-10, double E0 = 1.0, int n_nodes = 2001);

// (u, v, E, w_rho) on the layer at parameter t (t = x for graphs).
LayerState layer_state_p2(const FreeLayer& layer, double t);

// Finite ramp ending at x_star with dead gas below the free layer. x_max <= 0 selects 5 x_star.
MeasureSolution solve_problem2(const RampProfile& profile, const DeadGasSpec& spec,
                               double E0 = 1.0, double x_max = 0.0, double tol = 1e-10,
                               int admissibility_samples = 401);

}  // namespace hyflow
