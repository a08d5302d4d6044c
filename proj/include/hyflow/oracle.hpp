#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "hyflow/geometry.hpp"
#include "hyflow/problem2.hpp"
#include "hyflow/problem3.hpp"

namespace hyflow {

// Layer bookkeeping at the right edge of a cell.
struct AccretionState {
  double x = 0.0;
  double y = 0.0;
  double slope = 0.0;
  double M = 0.0;   // mass flux through the vertical section
  double Px = 0.0;  // momentum fluxes
  double Py = 0.0;
  double ME = 0.0;  // energy flux
  double w_p = 0.0; // wall pressure estimate of the cell (wall marching only)
};

struct AccretionResult {
  std::vector<AccretionState> cells;  // cells[0] is the initial state
  std::optional<double> blow_up_x;    // last x reached before Px dropped to zero
  const AccretionState& back() const { return cells.back(); }
  // Linear interpolation of y, clamped to the marched range.
  double height(double x) const;
};

// Sticky accretion along the wall on [0, x_end] with ceil(x_end/dx) cells equispaced in
// x + b(x). Each cell captures the free stream crossing the wall rise, then the wall
// impulse removes the normal momentum.
AccretionResult accrete_wall(const Geometry& geometry, double x_end, double dx, double E0 = 1.0);

using Downstream = std::variant<DeadGasSpec, JetSpec>;

// Explicit march of the detached layer from (x_star, b(x_star)) to x_end, starting from
// the wall march; stops early if Px becomes nonpositive.
AccretionResult accrete_free_layer(const Geometry& geometry, const Downstream& downstream,
                                   double dx, double x_end, double E0 = 1.0);

// Least-squares slope of log(error) against log(dx).
double measured_order(const std::vector<double>& dxs, const std::vector<double>& errors);

// Maximum of |y_i - reference(x_i)| over the marched cells with x in [x_lo, x_hi].
double sup_deviation(const AccretionResult& result, const std::function<double(double)>& reference,
                     double x_lo, double x_hi);

}  // namespace hyflow
