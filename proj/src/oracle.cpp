#include "hyflow/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "hyflow/error.hpp"
#include "hyflow/roots.hpp"

namespace hyflow {

namespace {

int cell_count(double length, double dx) {
  if (!(dx > 0.0)) throw DomainError("cell width must be positive");
  if (!(length >= 0.0) || !std::isfinite(length)) throw DomainError("invalid march length");
  return std::max(1, static_cast<int>(std::llround(std::ceil(length / dx - 1e-9))));
}

}  // namespace

double AccretionResult::height(double x) const {
  if (cells.empty()) throw DomainError("empty accretion result");
  if (x <= cells.front().x) return cells.front().y;
  if (x >= cells.back().x) return cells.back().y;
  auto it = std::lower_bound(cells.begin(), cells.end(), x,
                             [](const AccretionState& c, double v) { return c.x < v; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.y + (hi.y - lo.y) * (x - lo.x) / (hi.x - lo.x);
}

AccretionResult accrete_wall(const Geometry& geometry, double x_end, double dx, double E0) {
  const double x0 = geometry.profile().x_begin();
  // Nodes equispaced in x + b(x): cells stay short where the wall turns steeply.
  const int n = cell_count(x_end - x0, dx);
  const double sigma0 = x0 + geometry.b(x0);
  const double sigma_step = (x_end + geometry.b(x_end) - sigma0) / n;
  auto node = [&](int i) {
    if (i == n) return x_end;
    const double target = sigma0 + sigma_step * i;
    return find_root([&](double x) { return x + geometry.b(x) - target; }, x0, x_end);
  };
  AccretionResult result;
  result.cells.reserve(n + 1);
  AccretionState s;
  s.x = x0;
  s.y = geometry.b(x0);
  s.slope = geometry.at(x0).db;
  result.cells.push_back(s);
  for (int i = 0; i < n; ++i) {
    const double x1 = node(i + 1);
    const double y1 = geometry.b(x1);
    const double captured = y1 - s.y;  // unit free-stream mass flux crossing the rise
    double px = s.Px + captured, py = s.Py;
    const auto normal = geometry.normal(x1);
    const double impulse = -(px * normal[0] + py * normal[1]);
    px += impulse * normal[0];
    py += impulse * normal[1];
    const double chord = std::hypot(x1 - s.x, y1 - s.y);
    s.w_p = chord > 0.0 ? impulse / chord : 0.0;
    s.x = x1;
    s.y = y1;
    s.slope = geometry.at(x1).db;
    s.M += captured;
    s.Px = px;
    s.Py = py;
    s.ME += E0 * captured;
    result.cells.push_back(s);
  }
  return result;
}

AccretionResult accrete_free_layer(const Geometry& geometry, const Downstream& downstream,
                                   double dx, double x_end, double E0) {
  const double x_star = std::visit([](const auto& d) { return d.x_star; }, downstream);
  if (!(x_end > x_star)) throw DomainError("march must end beyond the detachment point");
  const AccretionResult wall = accrete_wall(geometry, x_star, dx, E0);
  AccretionState s = wall.back();
  s.w_p = 0.0;
  AccretionResult result;
  result.cells.push_back(s);
  const int n = cell_count(x_end - x_star, dx);
  const double step = (x_end - x_star) / n;
  const auto* jet = std::get_if<JetSpec>(&downstream);
  const auto* gas = std::get_if<DeadGasSpec>(&downstream);
  if (jet && !(jet->u > 0.0)) throw DomainError("jet must move downstream");
  double jet_top = s.y;  // top streamline of jet gas not yet absorbed
  for (int i = 0; i < n; ++i) {
    if (!(s.Px > 0.0)) {
      result.blow_up_x = s.x;
      return result;
    }
    const double x1 = (i + 1 == n) ? x_end : x_star + step * (i + 1);
    const double ddx = x1 - s.x;
    const double slope = s.Py / s.Px;
    const double dy = slope * ddx;
    const double y1 = s.y + dy;

    // free stream from above
    double dM = dy, dPx = dy, dPy = 0.0, dE = E0 * dy;
    if (gas) {
      dPx += -gas->p_bar * dy;
      dPy += gas->p_bar * ddx;
    }
    if (jet) {
      jet_top += jet->v / jet->u * ddx;
      if (jet_top > y1) {
        const double q = jet->rho * jet->u * (jet_top - y1);
        dM += q;
        dPx += q * jet->u;
        dPy += q * jet->v;
        dE += q * jet->E;
        jet_top = y1;
      }
    }
    s.x = x1;
    s.y = y1;
    s.M += dM;
    s.Px += dPx;
    s.Py += dPy;
    s.ME += dE;
    s.slope = s.Px != 0.0 ? s.Py / s.Px : kInfinity;
    result.cells.push_back(s);
  }
  if (!(s.Px > 0.0)) result.blow_up_x = s.x;
  return result;
}

double measured_order(const std::vector<double>& dxs, const std::vector<double>& errors) {
  if (dxs.size() != errors.size() || dxs.size() < 2)
    throw DomainError("order fit needs matching samples at two or more steps");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < dxs.size(); ++i) {
    if (!(dxs[i] > 0.0) || !(errors[i] > 0.0)) throw DomainError("order fit needs positive data");
    const double lx = std::log(dxs[i]), ly = std::log(errors[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double m = static_cast<double>(dxs.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double sup_deviation(const AccretionResult& result, const std::function<double(double)>& reference,
                     double x_lo, double x_hi) {
  double worst = 0.0;
  for (const auto& c : result.cells)
    if (c.x >= x_lo && c.x <= x_hi) worst = std::max(worst, std::abs(c.y - reference(c.x)));
  return worst;
}

}  // namespace hyflow
