#include "hyflow/layer.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "hyflow/error.hpp"
#include "hyflow/interpolation.hpp"
#include "hyflow/ode.hpp"
#include "hyflow/roots.hpp"

namespace hyflow {

std::array<double, 4> LayerBalance::fluxes(double x, double y) const {
  const double X = x - x0, Y = y - y0;
  std::array<double, 4> F;
  for (int k = 0; k < 4; ++k) F[k] = f0[k] + a[k] * X + c[k] * Y;
  return F;
}

double LayerBalance::slope(double x, double y) const {
  const auto F = fluxes(x, y);
  return F[2] / F[1];
}

double LayerBalance::first_integral(double x, double y) const {
  const double X = x - x0, Y = y - y0;
  return 0.5 * c[1] * Y * Y + (f0[1] + a[1] * X) * Y - (f0[2] * X + 0.5 * a[2] * X * X);
}

double LayerBalance::discriminant(double x) const {
  const double X = x - x0;
  const double Q = f0[1] + a[1] * X;
  const double R = f0[2] * X + 0.5 * a[2] * X * X;
  return Q * Q + 2.0 * c[1] * R;
}

std::optional<double> asymptotic_slope(const LayerBalance& balance) {
  const double ax = balance.a[1], ay = balance.a[2], cx = balance.c[1];
  const double lead = ax * ax + cx * ay;
  if (lead < 0.0) return std::nullopt;
  const double denom = ax + std::sqrt(lead);
  if (denom > 0.0) return ay / denom;
  if (ay == 0.0) return 0.0;  // square-root growth
  if (ay > 0.0 && std::abs(cx) < 1e-12) return kInfinity;
  return std::nullopt;
}

LayerState layer_state_from_fluxes(const std::array<double, 4>& F) {
  LayerState s;
  const double M = F[0];
  if (!(M > 0.0)) return s;
  s.u = F[1] / M;
  s.v = F[2] / M;
  s.E = F[3] / M;
  s.w_rho = M * M / std::hypot(F[1], F[2]);
  return s;
}

CurveSample layer_sample(double x, double y, double dx, double dy,
                         const std::array<double, 4>& F) {
  CurveSample s;
  s.x = x;
  s.y = y;
  s.dx = dx;
  s.dy = dy;
  const double speed = std::hypot(dx, dy);
  const double tx = dx / speed, ty = dy / speed;
  for (int k = 0; k < 4; ++k) {
    s.w_m[k] = F[k] * tx;
    s.w_n[k] = F[k] * ty;
  }
  const LayerState st = layer_state_from_fluxes(F);
  s.u = st.u;
  s.v = st.v;
  s.E = st.E;
  s.w_rho = st.w_rho;
  return s;
}

CurveSample FreeLayer::sample(double t) const {
  const auto p = point(t);
  return layer_sample(p[0], p[1], p[2], p[3], balance.fluxes(p[0], p[1]));
}

LayerState FreeLayer::state(double t) const {
  if (t < t_begin || t > t_end)
    throw DomainError("layer parameter " + std::to_string(t) + " outside the layer");
  const auto p = point(t);
  return layer_state_from_fluxes(balance.fluxes(p[0], p[1]));
}

DiracCurve FreeLayer::curve(const std::string& name) const {
  DiracCurve c;
  c.name = name;
  c.t_begin = t_begin;
  c.t_end = t_end;
  auto self = std::make_shared<FreeLayer>(*this);
  c.sample = [self](double t) { return self->sample(t); };
  return c;
}

FreeLayer closed_form_graph_layer(const LayerBalance& balance, double x_end, std::string regime,
                                  double rational_threshold) {
  FreeLayer layer;
  layer.representation = FreeLayer::Representation::Graph;
  layer.regime = std::move(regime);
  layer.balance = balance;
  layer.x_begin = layer.t_begin = balance.x0;
  layer.x_end = layer.t_end = x_end;
  const bool rational = std::abs(balance.c[1]) < rational_threshold;
  layer.height = [balance, rational](double x) {
    const double X = x - balance.x0;
    const double Q = balance.f0[1] + balance.a[1] * X;
    const double R = balance.f0[2] * X + 0.5 * balance.a[2] * X * X;
    if (rational) return balance.y0 + R / Q;
    const double D = std::max(Q * Q + 2.0 * balance.c[1] * R, 0.0);
    return balance.y0 + 2.0 * R / (Q + std::sqrt(D));
  };
  auto height = layer.height;
  layer.point = [balance, height](double x) -> std::array<double, 4> {
    const double y = height(x);
    return {x, y, 1.0, balance.slope(x, y)};
  };
  return layer;
}

FreeLayer closed_form_ellipse_layer(const LayerBalance& balance, std::string regime) {
  const double ay = balance.a[2];
  const double cx = -balance.c[1];
  if (!(ay > 0.0 && cx > 0.0) || balance.a[1] != 0.0)
    throw DomainError("closed_form_ellipse_layer: balance does not describe an ellipse");
  const double Xc = -balance.f0[2] / ay;
  const double Yc = balance.f0[1] / cx;
  const double R = std::sqrt(ay * Xc * Xc + cx * Yc * Yc);
  const double A = R / std::sqrt(ay);
  const double B = R / std::sqrt(cx);
  const double theta0 = std::atan2(Yc / B, -Xc / A);

  FreeLayer layer;
  layer.representation = FreeLayer::Representation::Parametric;
  layer.regime = std::move(regime);
  layer.balance = balance;
  layer.t_begin = 0.0;
  layer.t_end = theta0;
  layer.x_begin = balance.x0;
  layer.x_end = balance.x0 + Xc + A;
  const double x0 = balance.x0, y0 = balance.y0;
  layer.point = [=](double t) -> std::array<double, 4> {
    const double theta = theta0 - t;
    if (t == 0.0) return {x0, y0, A * std::sin(theta0), B * std::cos(theta0)};
    return {x0 + Xc + A * std::cos(theta), y0 + Yc - B * std::sin(theta), A * std::sin(theta),
            B * std::cos(theta)};
  };
  layer.height = [balance, x_end = layer.x_end](double x) {
    const double X = std::min(x, x_end) - balance.x0;
    const double Q = balance.f0[1];
    const double Rr = balance.f0[2] * X + 0.5 * balance.a[2] * X * X;
    const double D = std::max(Q * Q + 2.0 * balance.c[1] * Rr, 0.0);
    return balance.y0 + 2.0 * Rr / (Q + std::sqrt(D));
  };

  BlowUp end;
  end.x = layer.x_end;
  end.y = y0 + Yc;
  auto F = balance.fluxes(end.x, end.y);
  F[1] = 0.0;
  F[2] = ay * A;
  end.u = 0.0;
  end.v = F[2] / F[0];
  end.w_rho = F[0] * F[0] / F[2];
  layer.blow_up = end;
  return layer;
}

FreeLayer integrate_graph_layer(const LayerBalance& balance, double x_end, double tol,
                                int n_nodes, std::string regime) {
  if (n_nodes < 2) throw DomainError("integrate_graph_layer: need at least two nodes");
  std::vector<double> xs(n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    xs[i] = balance.x0 + (x_end - balance.x0) * i / (n_nodes - 1);
  xs.back() = x_end;
  auto rhs = [&balance](double x, const OdeState<1>& y) -> OdeState<1> {
    const auto F = balance.fluxes(x, y[0]);
    if (!(F[1] > 0.0)) return {std::numeric_limits<double>::quiet_NaN()};
    return {F[2] / F[1]};
  };
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  const auto states = integrate_to<1>(rhs, balance.x0, {balance.y0}, xs, opt);
  std::vector<double> ys(n_nodes), ds(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    ys[i] = states[i][0];
    ds[i] = balance.slope(xs[i], ys[i]);
  }
  auto table = std::make_shared<HermiteTable>(xs, ys, ds);

  FreeLayer layer;
  layer.representation = FreeLayer::Representation::Graph;
  layer.regime = std::move(regime);
  layer.balance = balance;
  layer.x_begin = layer.t_begin = balance.x0;
  layer.x_end = layer.t_end = x_end;
  layer.height = [table](double x) { return (*table)(x); };
  layer.point = [table, balance](double x) -> std::array<double, 4> {
    const double y = (*table)(x);
    return {x, y, 1.0, balance.slope(x, y)};
  };
  return layer;
}

FreeLayer integrate_arclength_layer(const LayerBalance& balance, double s_max, double tol,
                                    std::string regime) {
  auto rhs = [&balance](double, const OdeState<2>& z) -> OdeState<2> {
    const auto F = balance.fluxes(z[0], z[1]);
    const double norm = std::hypot(F[1], F[2]);
    return {F[1] / norm, F[2] / norm};
  };
  auto event = [&balance](double, const OdeState<2>& z) { return balance.fluxes(z[0], z[1])[1]; };
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  const auto traj = integrate_until<2>(rhs, event, 0.0, {balance.x0, balance.y0}, s_max, 0.02, opt);

  const std::size_t n = traj.t.size();
  std::vector<double> xs(n), ys(n), dxs(n), dys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = traj.y[i][0];
    ys[i] = traj.y[i][1];
    const auto d = rhs(traj.t[i], traj.y[i]);
    dxs[i] = d[0];
    dys[i] = d[1];
  }
  auto x_of_s = std::make_shared<HermiteTable>(traj.t, xs, dxs);
  auto y_of_s = std::make_shared<HermiteTable>(traj.t, ys, dys);

  FreeLayer layer;
  layer.representation = FreeLayer::Representation::Parametric;
  layer.regime = std::move(regime);
  layer.balance = balance;
  layer.t_begin = 0.0;
  layer.t_end = traj.t.back();
  layer.x_begin = balance.x0;
  layer.x_end = xs.back();
  layer.point = [x_of_s, y_of_s](double s) -> std::array<double, 4> {
    const auto xv = x_of_s->eval(s);
    const auto yv = y_of_s->eval(s);
    return {xv.value, yv.value, xv.slope, yv.slope};
  };
  const double s_end = layer.t_end;
  layer.height = [x_of_s, y_of_s, s_end](double x) {
    if (x <= x_of_s->values().front()) return (*y_of_s)(0.0);
    if (x >= x_of_s->values().back()) return (*y_of_s)(s_end);
    const double s = find_root([&](double s) { return (*x_of_s)(s) - x; }, 0.0, s_end);
    return (*y_of_s)(s);
  };
  if (traj.event_reached) {
    BlowUp end;
    end.x = xs.back();
    end.y = ys.back();
    const auto F = balance.fluxes(end.x, end.y);
    end.u = F[1] / F[0];
    end.v = F[2] / F[0];
    end.w_rho = F[0] * F[0] / std::hypot(F[1], F[2]);
    layer.blow_up = end;
  }
  return layer;
}

}  // namespace hyflow
