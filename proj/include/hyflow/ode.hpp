#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "hyflow/error.hpp"
#include "hyflow/roots.hpp"

namespace hyflow {

template <std::size_t N>
using OdeState = std::array<double, N>;

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  long max_steps = 5'000'000;
};

namespace detail {

namespace odeint = boost::numeric::odeint;

// Adapts y' = rhs(t, y) to the solver's (state, derivative, time) form.
template <std::size_t N, class Rhs>
struct System {
  const Rhs* rhs;
  void operator()(const OdeState<N>& y, OdeState<N>& dydt, double t) const { dydt = (*rhs)(t, y); }
};

template <std::size_t N>
using Stepper = odeint::runge_kutta_dopri5<OdeState<N>>;

template <std::size_t N>
auto controlled(const OdeOptions& opt) {
  return odeint::make_controlled(opt.atol, opt.rtol, Stepper<N>());
}

inline void check_budget(double t, double h, long steps, const OdeOptions& opt) {
  if (h < opt.min_step)
    throw ConvergenceError("ODE step size underflow at t = " + std::to_string(t), t);
  if (steps > opt.max_steps)
    throw ConvergenceError("ODE step budget exhausted at t = " + std::to_string(t), t);
}

template <std::size_t N>
bool finite(const OdeState<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

// Integrates y' = rhs(t, y) from (t0, y0) with an adaptive Dormand-Prince 5(4) pair and
// returns the state at each output time. Outputs must be sorted ascending and not below t0.
template <std::size_t N, class Rhs>
std::vector<OdeState<N>> integrate_to(Rhs rhs, double t0, OdeState<N> y0,
                                      const std::vector<double>& outputs,
                                      const OdeOptions& opt = {}) {
  const detail::System<N, Rhs> system{&rhs};
  auto stepper = detail::controlled<N>(opt);
  std::vector<OdeState<N>> result;
  result.reserve(outputs.size());
  double t = t0;
  OdeState<N> y = y0;
  double h = opt.initial_step;
  long steps = 0;
  for (double target : outputs) {
    if (target < t) throw DomainError("integrate_to: output times must be ascending from t0");
    while (t < target) {
      const double remaining = target - t;
      const bool lands = h >= remaining;
      double dt = lands ? remaining : h;
      OdeState<N> trial = y;
      double tt = t;
      const auto outcome = stepper.try_step(system, trial, tt, dt);
      if (outcome == detail::odeint::success && detail::finite(trial)) {
        t = lands ? target : tt;
        y = trial;
        h = lands ? std::max(h, dt) : dt;
      } else {
        if (outcome == detail::odeint::success) stepper.reset();
        h = outcome == detail::odeint::success ? 0.5 * (lands ? remaining : h) : dt;
      }
      detail::check_budget(t, h, ++steps, opt);
    }
    result.push_back(y);
  }
  return result;
}

template <std::size_t N>
struct Trajectory {
  std::vector<double> t;
  std::vector<OdeState<N>> y;
  bool event_reached = false;
};

// Integrates until t_max or until event(t, y) changes sign from positive to non-positive.
// The terminal event point is located by root-finding on the size of the final step.
// Accepted steps are further subdivided so that consecutive records are at most
// max_record_gap apart in t.
template <std::size_t N, class Rhs, class Event>
Trajectory<N> integrate_until(Rhs rhs, Event event, double t0, OdeState<N> y0, double t_max,
                              double max_record_gap, const OdeOptions& opt = {}) {
  const detail::System<N, Rhs> system{&rhs};
  auto stepper = detail::controlled<N>(opt);
  detail::Stepper<N> fixed;
  // Fixed steps from one saved point; the start derivative is passed explicitly.
  auto step_from = [&](double t, const OdeState<N>& y, double h) {
    OdeState<N> out, dydt_out;
    fixed.do_step(system, y, rhs(t, y), t, out, dydt_out, h);
    return out;
  };
  Trajectory<N> out;
  double t = t0;
  OdeState<N> y = y0;
  out.t.push_back(t);
  out.y.push_back(y);
  double h = opt.initial_step;
  long steps = 0;
  while (t < t_max) {
    const bool lands = h >= t_max - t && t_max - t <= max_record_gap;
    double dt = std::min({h, t_max - t, max_record_gap});
    OdeState<N> trial = y;
    double tt = t;
    const auto outcome = stepper.try_step(system, trial, tt, dt);
    if (outcome != detail::odeint::success || !detail::finite(trial)) {
      if (outcome == detail::odeint::success) stepper.reset();
      h = outcome == detail::odeint::success ? 0.5 * (tt - t) : dt;
    } else if (event(tt, trial) <= 0.0) {
      const double taken = tt - t;
      auto g = [&](double hh) { return event(t + hh, step_from(t, y, hh)); };
      const double h_event = find_root(g, 0.0, taken, {1e-16, 300});
      y = step_from(t, y, h_event);
      t += h_event;
      out.t.push_back(t);
      out.y.push_back(y);
      out.event_reached = true;
      return out;
    } else {
      t = lands ? t_max : tt;
      y = trial;
      out.t.push_back(t);
      out.y.push_back(y);
      h = dt;
    }
    detail::check_budget(t, h, ++steps, opt);
  }
  return out;
}

}  // namespace hyflow
