#pragma once

#include <array>

#include "hyflow/geometry.hpp"
#include "hyflow/layer.hpp"
#include "hyflow/measure.hpp"

namespace hyflow {

// Arc-length weight densities of the wall layer, indexed (mass, x-mom, y-mom, energy).
struct WallWeights {
  std::array<double, 4> w_m{};
  std::array<double, 4> w_n{};
  double w_p = 0.0;
  double w_rho = 0.0;
};

struct WallPressure {
  double value = 0.0;
  bool admissible = true;  // value > 0
};

// [b''H + b'^2 sqrt(1+b'^2)] / (1+b'^2)^(3/2); x > 0.
WallPressure newton_busemann_pressure(const Geometry& geometry, double x);

// Fluxes (b, H/sqrt(1+b'^2), b'H/sqrt(1+b'^2), E0 b) carried by the wall layer at x.
std::array<double, 4> wall_layer_fluxes(const Geometry& geometry, double x, double E0);

WallWeights wall_weights(const Geometry& geometry, double x, double E0 = 1.0);

// u = H/(b sqrt(1+b'^2)), v = b' u, E = E0. Throws DomainError for an empty layer.
LayerState layer_state(const Geometry& geometry, double x, double E0 = 1.0);

// Force (Fx, Fy) exerted by the flow on the wall between x_lo and x_hi.
std::array<double, 2> drag_lift(const Geometry& geometry, double x_lo, double x_hi,
                                double tol = 1e-10);

// Wedge whose Newton-Busemann pressure is the constant p in (0, 1).
RampProfile uniform_pressure_ramp(double p);

// Wall layer on [0, x_end] as a Dirac curve parametrized by x, and its pressure load.
DiracCurve wall_curve(std::shared_ptr<const Geometry> geometry, double x_end, double E0);
WallLoad wall_load(std::shared_ptr<const Geometry> geometry, double x_end);

// Infinite ramp: uniform upstream state above the wall, layer on the wall.
// Throws InadmissibleError with the first failing x sampled on [0, x_max].
MeasureSolution solve_problem1(const RampProfile& profile, double E0 = 1.0, double x_max = 10.0,
                               double tol = 1e-10, int admissibility_samples = 401);

}  // namespace hyflow
