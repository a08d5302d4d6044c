#pragma once

#include <optional>
#include <string>

#include "hyflow/geometry.hpp"
#include "hyflow/layer.hpp"
#include "hyflow/measure.hpp"

namespace hyflow {

// Pressureless jet leaving the nozzle below the ramp end x = x_star.
struct JetSpec {
  double x_star = 0.0;
  double rho = 1.0;
  double u = 1.0;
  double v = 0.0;
  double E = 1.0;

  FlowState state() const { return FlowState::from_state_relation(rho, u, v, E, 1.0); }
};

enum class JetRegime { Attached, VacuumUnbounded, VacuumBounded };
std::string to_string(JetRegime regime);

// Attached iff v/u >= b'(x_star); otherwise VacuumUnbounded iff v <= 0, else VacuumBounded.
JetRegime classify_regime(const Geometry& geometry, const JetSpec& spec);

// Layer balance for a layer fed by the stream above and the jet below, starting at
// (x0, y0) with fluxes f0.
LayerBalance jet_balance(const JetSpec& spec, double E0, double x0, double y0,
                         const std::array<double, 4>& f0);

struct EntropyReport {
  bool satisfied = true;
  std::optional<double> first_violation;
  double min_slope = kInfinity;
  double max_slope = -kInfinity;
  double min_mass_flux = kInfinity;  // denominator d(x) of the layer states
};

// Samples 0 <= s' <= v/u and d > 0 at n points of the layer (slack absorbs rounding).
EntropyReport check_entropy(const FreeLayer& layer, const JetSpec& spec, int n_samples = 1000,
                            double slack = 1e-12);

// Closed-form attached layer on [x_star, x_max]; rational when |1 - rho u^2| < 1e-12.
// Throws EntropyViolation when the sampled checks fail.
FreeLayer attached_layer(const Geometry& geometry, const JetSpec& spec, double x_max,
                         double E0 = 1.0, int n_check = 1000);

// Attached layer by adaptive Runge-Kutta integration of the tangency ODE.
FreeLayer attached_layer_ode(const Geometry& geometry, const JetSpec& spec, double x_max,
                             double tol = 1e-10, double E0 = 1.0, int n_nodes = 2001);

struct Collision {
  double x = 0.0;
  double y = 0.0;
  double slope = 0.0;  // layer slope h'(x) at the collision
};

struct VacuumRegion {
  FreeLayer upper;  // free layer above the vacuum, on [x_star, min(collision, x_max)]
  double contact_x0 = 0.0;
  double contact_y0 = 0.0;
  double contact_slope = 0.0;
  std::optional<Collision> collision;

  double contact(double x) const { return contact_y0 + contact_slope * (x - contact_x0); }
};

VacuumRegion vacuum_construction(const Geometry& geometry, const JetSpec& spec, double x_max,
                                 double E0 = 1.0);

// Layer after it absorbs the contact discontinuity, on [collision.x, x_max].
FreeLayer continue_after_collision(const Geometry& geometry, const JetSpec& spec,
                                   const Collision& collision, double x_max, double E0 = 1.0);
FreeLayer continue_after_collision_ode(const Geometry& geometry, const JetSpec& spec,
                                       const Collision& collision, double x_max,
                                       double tol = 1e-10, double E0 = 1.0, int n_nodes = 2001);

// x_max <= 0 selects 5 x_star.
MeasureSolution solve_problem3(const RampProfile& profile, const JetSpec& spec, double E0 = 1.0,
                               double x_max = 0.0, double tol = 1e-10,
                               int admissibility_samples = 401);

struct PointMass {
  double y = 0.0;
  double weight = 0.0;
  double u = 0.0, v = 0.0, E = 0.0;
};

// Trace of the solution on x = x_star: bulk states above and below the wall end and
// the point mass carried by the layer there.
struct SingularRiemannData {
  double x_star = 0.0;
  double y_star = 0.0;
  FlowState upper_state;
  std::optional<FlowState> lower_state;
  std::optional<PointMass> point_mass;
};

SingularRiemannData export_singular_riemann(const MeasureSolution& solution, double x_star);

}  // namespace hyflow
