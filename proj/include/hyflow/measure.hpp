#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyflow/geometry.hpp"

namespace hyflow {

// Bulk gas state. Pressure follows p = ((gamma-1)/gamma) rho (E - (u^2+v^2)/2).
struct FlowState {
  double rho = 0.0;
  double u = 0.0;
  double v = 0.0;
  double E = 0.0;
  double p = 0.0;
  double gamma = 1.0;

  static FlowState from_state_relation(double rho, double u, double v, double E, double gamma);
  static FlowState vacuum() { return {}; }
  static FlowState upstream(double E0) { return from_state_relation(1.0, 1.0, 0.0, E0, 1.0); }
  double state_relation_pressure() const;

  // Components (mass, x-momentum, y-momentum, energy) of the x- and y-fluxes.
  std::array<double, 4> x_flux() const;
  std::array<double, 4> y_flux() const;
};

// Pointwise data of a concentration curve at parameter t. Weights are
// densities with respect to arc length, indexed (mass, x-momentum, y-momentum, energy).
struct CurveSample {
  double x = 0.0, y = 0.0;
  double dx = 0.0, dy = 0.0;  // derivatives of the parametrization
  std::array<double, 4> w_m{};
  std::array<double, 4> w_n{};
  double w_rho = 0.0;
  double u = 0.0, v = 0.0, E = 0.0;
  double speed() const;
};

// Dirac measure carried by the curve t -> (x(t), y(t)), t in [t_begin, t_end].
// x(t) is nondecreasing for every curve built by the solvers.
struct DiracCurve {
  std::string name;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::function<CurveSample(double)> sample;
};

struct PressureSample {
  double x = 0.0, y = 0.0;
  double dx = 0.0, dy = 0.0;
  double w_p = 0.0;                 // force per unit arc length
  std::array<double, 2> normal{};  // unit normal pointing into the gas
};

// Wall pressure distribution on a solid boundary piece.
struct WallLoad {
  std::string name;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::function<PressureSample(double)> sample;
};

// Vertical boundary segment x = const, y in (y_lo, y_hi), through which the constant
// flux vector (mass, x-momentum, y-momentum, energy) acts on the domain. Inflow lines
// carry the x-flux of the entering state; pressure lines carry p times the normal.
struct BoundaryLine {
  std::string name;
  std::string kind;  // inflow | pressure
  double x = 0.0;
  double y_lo = -kInfinity;
  double y_hi = kInfinity;
  std::array<double, 4> flux{};
  std::optional<FlowState> state;  // inflow lines
  double pressure = 0.0;           // pressure lines, normal (1, 0)

  static BoundaryLine inflow(std::string name, double x, double y_lo, double y_hi,
                             const FlowState& state);
  static BoundaryLine wall_pressure(std::string name, double x, double y_lo, double y_hi,
                                    double pressure);
};

// Graph-bounded strip {x_lo < x < x_hi, lower(x) < y < upper(x)} with constant state.
// Infinite bounds are allowed.
struct BulkRegion {
  std::string name;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::function<double(double)> lower;
  std::function<double(double)> upper;
  std::string lower_label;  // curve name or "-inf"/"+inf", used for export
  std::string upper_label;
  FlowState state;
};

// Straight contact discontinuity y = y0 + slope (x - x0) on [x0, x_end]; carries no mass.
struct ContactLine {
  double x0 = 0.0;
  double y0 = 0.0;
  double slope = 0.0;
  double x_end = 0.0;
};

struct Classification {
  std::string kind = "regular";  // regular | blow-up | vacuum
  std::string regime;
  std::optional<std::array<double, 2>> blow_up;
  std::optional<std::array<double, 2>> collision;
  std::optional<double> asymptotic_slope;  // of the outermost free layer
};

struct MeasureSolution {
  std::string problem;  // p1 | p2 | p3, empty for hand-built solutions
  std::vector<BulkRegion> regions;
  std::vector<DiracCurve> curves;
  std::vector<WallLoad> loads;
  std::vector<BoundaryLine> lines;
  std::vector<ContactLine> contacts;
  Classification classification;

  // Solution is defined for x < x_limit; test functions must stay strictly inside.
  double x_limit = kInfinity;
  // Points where weights or boundaries are singular; test functions must avoid them.
  std::vector<std::array<double, 2>> singular_points;

  // Context for boundary-data exports.
  std::shared_ptr<const Geometry> geometry;
  double E0 = 1.0;
  std::optional<double> x_star;
  std::optional<FlowState> lower_state;

  bool empty() const { return regions.empty() && curves.empty() && loads.empty() && lines.empty(); }
  const DiracCurve* find_curve(const std::string& name) const;
};

}  // namespace hyflow
