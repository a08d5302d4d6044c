#include "hyflow/problem1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hyflow/error.hpp"
#include "hyflow/quadrature.hpp"

namespace hyflow {

WallPressure newton_busemann_pressure(const Geometry& geometry, double x) {
  if (!(x > 0.0)) throw DomainError("newton_busemann_pressure: x must be positive");
  const ProfileValues v = geometry.at(x);
  const double H = geometry.H(x);
  const double q = 1.0 + v.db * v.db;
  const double value = (v.d2b * H + v.db * v.db * std::sqrt(q)) / (q * std::sqrt(q));
  return {value, value > 0.0};
}

std::array<double, 4> wall_layer_fluxes(const Geometry& geometry, double x, double E0) {
  const ProfileValues v = geometry.at(x);
  if (std::isinf(v.db)) return {0.0, 0.0, 0.0, 0.0};
  const double H = geometry.H(x);
  const double px = H / std::sqrt(1.0 + v.db * v.db);
  return {v.b, px, v.db * px, E0 * v.b};
}

WallWeights wall_weights(const Geometry& geometry, double x, double E0) {
  if (!(x > 0.0)) throw DomainError("wall_weights: x must be positive");
  const ProfileValues v = geometry.at(x);
  const double H = geometry.H(x);
  WallWeights w;
  if (H == 0.0) {
    if (v.b > 0.0) throw DomainError("wall_weights: H = 0 with b > 0");
    return w;
  }
  const auto F = wall_layer_fluxes(geometry, x, E0);
  const double root = std::sqrt(1.0 + v.db * v.db);
  for (int k = 0; k < 4; ++k) {
    w.w_m[k] = F[k] / root;
    w.w_n[k] = v.db * w.w_m[k];
  }
  w.w_p = newton_busemann_pressure(geometry, x).value;
  w.w_rho = v.b * v.b / H;
  return w;
}

LayerState layer_state(const Geometry& geometry, double x, double E0) {
  if (!(x > 0.0)) throw DomainError("layer_state: x must be positive");
  const ProfileValues v = geometry.at(x);
  const double H = geometry.H(x);
  if (!(v.b > 0.0) || !(H > 0.0)) throw DomainError("layer_state: empty wall layer");
  LayerState s;
  s.u = H / (v.b * std::sqrt(1.0 + v.db * v.db));
  s.v = v.db * s.u;
  s.E = E0;
  s.w_rho = v.b * v.b / H;
  return s;
}

std::array<double, 2> drag_lift(const Geometry& geometry, double x_lo, double x_hi, double tol) {
  if (!(x_lo >= 0.0 && x_lo < x_hi && x_hi <= geometry.profile().x_end()))
    throw DomainError("drag_lift: need 0 <= x_lo < x_hi <= x_end");
  const QuadratureOptions opt{tol, 0.0, 4000};
  const double fx = integrate_adaptive(
                        [&](double x) {
                          return newton_busemann_pressure(geometry, x).value * geometry.at(x).db;
                        },
                        x_lo, x_hi, opt)
                        .value;
  const double fy = integrate_adaptive(
                        [&](double x) { return newton_busemann_pressure(geometry, x).value; },
                        x_lo, x_hi, opt)
                        .value;
  return {fx, -fy};
}

RampProfile uniform_pressure_ramp(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("uniform_pressure_ramp: p must lie in (0, 1)");
  RampProfile profile = RampProfile::wedge(std::sqrt(p / (1.0 - p)));
  // H' = b'/sqrt(1+b'^2), H'' = b''/(1+b'^2)^(3/2); H''H + H'^2 must equal p.
  for (double x : {0.5, 1.0, 2.0, 10.0}) {
    const ProfileValues v = profile.eval(x);
    const double q = 1.0 + v.db * v.db;
    const double dH = v.db / std::sqrt(q);
    const double d2H = v.d2b / (q * std::sqrt(q));
    const double residual = d2H * arc_integral_H(profile, x) + dH * dH - p;
    if (std::abs(residual) > 1e-12) throw Error("uniform_pressure_ramp: consistency check failed");
  }
  return profile;
}

DiracCurve wall_curve(std::shared_ptr<const Geometry> geometry, double x_end, double E0) {
  DiracCurve c;
  c.name = "wall";
  c.t_begin = 0.0;
  c.t_end = x_end;
  c.sample = [geometry, E0](double x) {
    const ProfileValues v = geometry->at(x);
    if (std::isinf(v.db)) {
      CurveSample s;
      s.x = x;
      s.y = v.b;
      s.dx = 1.0;
      s.dy = v.db;
      return s;
    }
    CurveSample s = layer_sample(x, v.b, 1.0, v.db, wall_layer_fluxes(*geometry, x, E0));
    if (v.b == 0.0 && v.db > 0.0) {
      // Empty tip: the state is the limit along the tangent wedge.
      const double q = 1.0 + v.db * v.db;
      s.u = 1.0 / q;
      s.v = v.db / q;
      s.E = E0;
    }
    return s;
  };
  return c;
}

WallLoad wall_load(std::shared_ptr<const Geometry> geometry, double x_end) {
  WallLoad load;
  load.name = "wall";
  load.t_begin = 0.0;
  load.t_end = x_end;
  load.sample = [geometry](double x) {
    PressureSample s;
    const ProfileValues v = geometry->at(x);
    s.x = x;
    s.y = v.b;
    s.dx = 1.0;
    s.dy = v.db;
    s.normal = geometry->normal(x);
    s.w_p = x > 0.0 ? newton_busemann_pressure(*geometry, x).value
                    : std::numeric_limits<double>::quiet_NaN();
    return s;
  };
  return load;
}

MeasureSolution solve_problem1(const RampProfile& profile, double E0, double x_max, double tol,
                               int admissibility_samples) {
  x_max = std::min(x_max, profile.x_end());
  if (!(x_max > 0.0)) throw DomainError("solve_problem1: x_max must be positive");
  const auto report = check_admissibility(profile, 0.0, x_max, admissibility_samples, tol);
  if (!report.admissible)
    throw InadmissibleError("ramp is inadmissible at x = " + std::to_string(*report.first_failure),
                            *report.first_failure);
  auto geometry = std::make_shared<const Geometry>(profile, tol);

  MeasureSolution sol;
  sol.problem = "p1";
  sol.geometry = geometry;
  sol.E0 = E0;
  sol.x_limit = x_max;
  if (profile.vertical_at_origin()) sol.singular_points.push_back({0.0, 0.0});

  BulkRegion upstream;
  upstream.name = "upstream";
  upstream.x_lo = 0.0;
  upstream.x_hi = x_max;
  upstream.lower = [geometry](double x) { return geometry->b(x); };
  upstream.upper = [](double) { return kInfinity; };
  upstream.lower_label = "wall";
  upstream.upper_label = "+inf";
  upstream.state = FlowState::upstream(E0);
  sol.regions.push_back(upstream);

  sol.curves.push_back(wall_curve(geometry, x_max, E0));
  sol.loads.push_back(wall_load(geometry, x_max));
  sol.lines.push_back(BoundaryLine::inflow("upstream", 0.0, 0.0, kInfinity, FlowState::upstream(E0)));
  sol.classification.kind = "regular";
  sol.classification.regime = "Regular";
  return sol;
}

}  // namespace hyflow
