#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "hyflow/measure.hpp"

namespace hyflow {

// Velocity, energy and density weight carried by a concentration layer.
struct LayerState {
  double u = 0.0;
  double v = 0.0;
  double E = 0.0;
  double w_rho = 0.0;  // arc-length density
};

// Fluxes (mass, x-momentum, y-momentum, energy) carried by a layer through a vertical
// section grow linearly with the captured material:
//   F_k(x, y) = f0_k + a_k (x - x0) + c_k (y - y0),
// and the layer is tangent to its momentum: dy/dx = F_y-mom / F_x-mom.
// The balances met by the solvers satisfy c[2] == -a[1], which makes the tangency
// equation exact with a quadratic first integral.
struct LayerBalance {
  double x0 = 0.0;
  double y0 = 0.0;
  std::array<double, 4> f0{};
  std::array<double, 4> a{};
  std::array<double, 4> c{};

  std::array<double, 4> fluxes(double x, double y) const;
  double slope(double x, double y) const;
  // Quadratic first integral; zero on the layer.
  double first_integral(double x, double y) const;
  // Linear-in-y coefficient of the tangency equation, Px0 + a_x X.
  double linear_coefficient(double x) const { return f0[1] + a[1] * (x - x0); }
  // Discriminant of the first integral solved for y.
  double discriminant(double x) const;
};

// Curve sample built from fluxes through a vertical section and the tangent (dx, dy).
CurveSample layer_sample(double x, double y, double dx, double dy,
                         const std::array<double, 4>& fluxes);
LayerState layer_state_from_fluxes(const std::array<double, 4>& fluxes);

struct BlowUp {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
  double w_rho = 0.0;
};

struct FreeLayer {
  enum class Representation { Graph, Parametric };

  Representation representation = Representation::Graph;
  std::string regime;
  LayerBalance balance;
  double t_begin = 0.0;
  double t_end = 0.0;
  // (x, y, dx/dt, dy/dt) at parameter t; for graphs t = x.
  std::function<std::array<double, 4>(double)> point;
  // Height y(x) on [x_begin, x_end].
  std::function<double(double)> height;
  double x_begin = 0.0;
  double x_end = 0.0;
  std::optional<BlowUp> blow_up;

  CurveSample sample(double t) const;
  LayerState state(double t) const;
  DiracCurve curve(const std::string& name) const;
};

// Limit of the layer slope as x grows: a_y / (a_x + sqrt(a_x^2 + c_x a_y)) for the stable
// root; +inf for unbounded growth, empty when the discriminant turns negative (blow-up).
std::optional<double> asymptotic_slope(const LayerBalance& balance);

// Closed-form graph of the layer on [x0, x_end]. Uses the rational root when the
// y^2 coefficient |c[1]| is below rational_threshold, the radical root otherwise.
FreeLayer closed_form_graph_layer(const LayerBalance& balance, double x_end, std::string regime,
                                  double rational_threshold = 1e-12);

// Closed-form elliptic layer for balances with a[1] == 0, c[1] < 0 < a[2]. Returns the
// branch from the attachment point to the rightmost point of the ellipse, where the
// x-momentum vanishes. Parameter is the polar angle swept from the attachment point.
FreeLayer closed_form_ellipse_layer(const LayerBalance& balance, std::string regime);

// Adaptive Runge-Kutta integration of dy/dx = Py/Px from the attachment point,
// recorded on n_nodes uniform nodes of [x0, x_end].
FreeLayer integrate_graph_layer(const LayerBalance& balance, double x_end, double tol,
                                int n_nodes, std::string regime);

// Adaptive Runge-Kutta integration of the unit-speed system
// (x', y') = (Px, Py)/|(Px, Py)| until Px reaches zero or arc length s_max.
FreeLayer integrate_arclength_layer(const LayerBalance& balance, double s_max, double tol,
                                    std::string regime);

}  // namespace hyflow
