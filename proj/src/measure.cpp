#include "hyflow/measure.hpp"

#include <cmath>

namespace hyflow {

FlowState FlowState::from_state_relation(double rho, double u, double v, double E, double gamma) {
  FlowState s{rho, u, v, E, 0.0, gamma};
  s.p = s.state_relation_pressure();
  return s;
}

double FlowState::state_relation_pressure() const {
  if (gamma == 1.0) return 0.0;
  return (gamma - 1.0) / gamma * rho * (E - 0.5 * (u * u + v * v));
}

std::array<double, 4> FlowState::x_flux() const {
  return {rho * u, rho * u * u + p, rho * u * v, rho * u * E};
}

std::array<double, 4> FlowState::y_flux() const {
  return {rho * v, rho * u * v, rho * v * v + p, rho * v * E};
}

BoundaryLine BoundaryLine::inflow(std::string name, double x, double y_lo, double y_hi,
                                  const FlowState& state) {
  BoundaryLine line;
  line.name = std::move(name);
  line.kind = "inflow";
  line.x = x;
  line.y_lo = y_lo;
  line.y_hi = y_hi;
  line.flux = state.x_flux();
  line.state = state;
  return line;
}

BoundaryLine BoundaryLine::wall_pressure(std::string name, double x, double y_lo, double y_hi,
                                         double pressure) {
  BoundaryLine line;
  line.name = std::move(name);
  line.kind = "pressure";
  line.x = x;
  line.y_lo = y_lo;
  line.y_hi = y_hi;
  line.flux = {0.0, pressure, 0.0, 0.0};
  line.pressure = pressure;
  return line;
}

double CurveSample::speed() const { return std::hypot(dx, dy); }

const DiracCurve* MeasureSolution::find_curve(const std::string& name) const {
  for (const auto& c : curves)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace hyflow
