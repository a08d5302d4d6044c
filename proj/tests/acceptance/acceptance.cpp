// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hyflow/oracle.hpp"
#include "hyflow/problem1.hpp"
#include "hyflow/problem2.hpp"
#include "hyflow/problem3.hpp"
#include "hyflow/weak_verify.hpp"
#include "oracles.hpp"

using namespace hyflow;
namespace sr = oracles::sqrt_ramp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const Geometry& sqrt_geometry() {
  static const Geometry g(RampProfile::power(1.0, 0.5));
  return g;
}

int failures = 0;

void report(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) o.require(false, fmt("runtime %.2fs over budget", secs));
  if (!o.pass) ++failures;
  std::printf("criterion %d %s: %s (%.2fs)%s%s\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), secs,
              o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
}

double sup_on(const std::function<double(double)>& a, const std::function<double(double)>& b,
              double lo, double hi, int n) {
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    sup = std::max(sup, std::abs(a(x) - b(x)));
  }
  return sup;
}

JetSpec jet(double rho, double u, double v) { return JetSpec{2.0, rho, u, v, 1.0}; }

Outcome printed_shapes() {
  Outcome o;
  const double tol = 1e-12;
  const std::pair<double, double (*)(double)> cases[] = {
      {0.0, sr::layer_p0}, {0.5, sr::layer_phalf}, {1.0, sr::layer_p1}};
  for (const auto& [p, formula] : cases) {
    const auto sol = solve_problem2(RampProfile::power(1.0, 0.5), DeadGasSpec::with_pressure(2.0, p));
    const DiracCurve* layer = sol.find_curve("layer");
    double sup = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = 2.0 + (sol.x_limit - 2.0) * i / 99.0;
      const auto s = layer->sample(x);
      sup = std::max(sup, std::abs(s.y - formula(s.x)));
    }
    o.require(sup <= tol, fmt("p=%g", p) + fmt(" sup %.3g", sup));
  }
  const auto sol = solve_problem2(RampProfile::power(1.0, 0.5), DeadGasSpec::with_pressure(2.0, 2.0));
  const auto& b = *sol.classification.blow_up;
  o.require(std::abs(b[0] - sr::terminal_x_p2()) <= tol && std::abs(b[1] - sr::terminal_y_p2()) <= tol,
            "p=2 terminal point");
  const DiracCurve* layer = sol.find_curve("layer");
  double sup = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto s = layer->sample(layer->t_begin + (layer->t_end - layer->t_begin) * i / 99.0);
    sup = std::max(sup, std::abs(sr::ellipse_p2(s.x, s.y)));
  }
  o.require(sup <= tol, fmt("p=2 quadric residual %.3g", sup));
  return o;
}

Outcome sine_squared() {
  Outcome o;
  double worst = 0.0;
  for (int deg = 5; deg <= 45; deg += 5) {
    const double th = deg * std::numbers::pi / 180.0;
    const Geometry g(RampProfile::wedge(std::tan(th)));
    for (double x : {0.01, 0.5, 1.0, 7.0, 100.0})
      worst = std::max(worst, std::abs(newton_busemann_pressure(g, x).value - std::sin(th) * std::sin(th)));
  }
  o.require(worst <= 1e-14, fmt("max deviation %.3g", worst));
  if (o.pass) o.detail = fmt("max deviation %.3g", worst);
  return o;
}

Outcome ode_cross_check() {
  Outcome o;
  std::string checks;
  const double x_hi = 22.0;
  double worst = 0.0;
  for (double p : {0.0, 0.5, 1.0}) {
    const auto spec = DeadGasSpec::with_pressure(2.0, p);
    const auto cf = free_layer_closed_form(sqrt_geometry(), spec, x_hi);
    const auto ode = free_layer_ode(sqrt_geometry(), spec, x_hi);
    const double sup = sup_on(cf.height, ode.height, 2.0, x_hi, 4001);
    worst = std::max(worst, sup);
    o.require(sup <= 1e-8, fmt("p=%g", p) + fmt(" sup %.3g", sup));
  }
  {
    const auto spec = DeadGasSpec::with_pressure(2.0, 2.0);
    const auto cf = free_layer_closed_form(sqrt_geometry(), spec, x_hi);
    const auto ode = free_layer_ode(sqrt_geometry(), spec, x_hi);
    double sup = std::hypot(ode.blow_up->x - cf.blow_up->x, ode.blow_up->y - cf.blow_up->y);
    for (int i = 0; i <= 400; ++i) {
      const auto q = ode.point(ode.t_end * i / 400.0);
      sup = std::max(sup, std::abs(sr::ellipse_p2(q[0], q[1])));
    }
    worst = std::max(worst, sup);
    o.require(sup <= 1e-8, fmt("p=2 sup %.3g", sup));
  }
  // Check points against a test-side RK4 of the raw flux balance.
  const std::pair<JetSpec, double> jets[] = {{jet(1, 1, 0.5), 4.0}, {jet(4, 1, 0.5), 3.0}};
  for (const auto& [s, x_check] : jets) {
    const auto cf = attached_layer(sqrt_geometry(), s, x_hi);
    const auto ode = attached_layer_ode(sqrt_geometry(), s, x_hi);
    const double sup = sup_on(cf.height, ode.height, 2.0, x_hi, 4001);
    worst = std::max(worst, sup);
    o.require(sup <= 1e-8, fmt("jet rho=%g", s.rho) + fmt(" sup %.3g", sup));
    const double ref = oracles::jet_layer_height(s.rho, s.u, s.v, x_check);
    o.require(std::abs(cf.height(x_check) - ref) <= 1e-10,
              fmt("s(%g)", x_check) + fmt(" = %.10f", cf.height(x_check)) + fmt(" vs %.10f", ref));
    checks += fmt(", s(%g)", x_check) + fmt(" = %.10f", cf.height(x_check));
  }
  if (o.pass) o.detail = fmt("worst sup %.3g", worst) + checks;
  return o;
}

Outcome weak_form() {
  Outcome o;
  struct Case {
    std::string name;
    MeasureSolution sol;
  };
  const RampProfile root = RampProfile::power(1.0, 0.5);
  std::vector<Case> matrix;
  matrix.push_back({"p1-wedge", solve_problem1(RampProfile::wedge(std::tan(std::numbers::pi / 6)))});
  matrix.push_back({"p1-sqrt", solve_problem1(root)});
  for (double p : {0.0, 0.5, 1.0, 2.0})
    matrix.push_back({fmt("p2-p%g", p), solve_problem2(root, DeadGasSpec::with_pressure(2.0, p))});
  matrix.push_back({"p3-attached", solve_problem3(root, jet(1, 1, 0.5))});
  matrix.push_back({"p3-unbounded", solve_problem3(root, jet(1, 1, -0.3))});
  matrix.push_back({"p3-bounded", solve_problem3(root, jet(1, 1, 0.2))});

  double min_order = kInfinity, max_finest = 0.0;
  int functions = 0;
  for (const auto& c : matrix) {
    const auto grid = standard_test_grid(c.sol);
    functions += static_cast<int>(grid.size());
    const auto report = convergence_study(c.sol, grid, 5);
    for (const auto& f : report.fits) {
      max_finest = std::max(max_finest, f.finest);
      if (f.order && !f.at_rounding) min_order = std::min(min_order, *f.order);
    }
    o.require(report.passes(), c.name + " weak residuals");
    o.require(radon_nikodym_check(c.sol).curve_deviation <= 1e-12, c.name + " Radon-Nikodym");
  }

  // Perturbed wall pressure: the x-momentum residual must plateau, not converge.
  const MeasureSolution& wedge = matrix.front().sol;
  const auto perturbed = perturb_wall_pressure(wedge, 1.1);
  const TestFunction phi{2.0, 2.0 * std::tan(std::numbers::pi / 6), 0.5};
  double plateau = kInfinity;
  for (int level = 2; level < 5; ++level) {
    const auto r = residuals(perturbed, phi, phi.radius / std::pow(2.0, level + 2));
    const auto& mx = r[static_cast<int>(Identity::MomentumX)];
    plateau = std::min(plateau, std::abs(mx.value) / mx.scale);
  }
  o.require(plateau >= 1e-3, fmt("perturbation plateau %.3g", plateau));
  if (o.pass)
    o.detail = std::to_string(matrix.size()) + " solutions, " + std::to_string(functions) +
               " test functions, min order " + fmt("%.3f", min_order) + ", max finest " +
               fmt("%.3g", max_finest) + ", perturbation plateau " + fmt("%.3g", plateau);
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  const double dx = 1e-3;
  const double th = std::numbers::pi / 6;
  const auto wedge = accrete_wall(Geometry(RampProfile::wedge(std::tan(th))), 1.0, dx);
  double wedge_err = 0.0;
  for (std::size_t i = 1; i < wedge.cells.size(); ++i)
    wedge_err = std::max(wedge_err, std::abs(wedge.cells[i].w_p / 0.25 - 1.0));
  o.require(wedge_err <= 0.01, fmt("wedge w_p rel %.3g", wedge_err));

  const auto root = accrete_wall(sqrt_geometry(), 2.0, dx);
  const double wp_err = std::abs(root.back().w_p * 27.0 - 1.0);
  const double m_err = std::abs(root.back().M / std::sqrt(2.0) - 1.0);
  o.require(wp_err <= 0.01, fmt("sqrt w_p rel %.3g", wp_err));
  o.require(m_err <= 1e-3, fmt("mass rel %.3g", m_err));

  double worst_shape = 0.0;
  const std::pair<double, double (*)(double)> gases[] = {{0.0, sr::layer_p0}, {0.5, sr::layer_phalf}};
  for (const auto& [p, formula] : gases) {
    const auto r = accrete_free_layer(sqrt_geometry(), DeadGasSpec::with_pressure(2.0, p), dx, 6.0);
    worst_shape = std::max(worst_shape, sup_deviation(r, formula, 2.0, 6.0));
  }
  {
    const auto r = accrete_free_layer(sqrt_geometry(), jet(1, 1, 0.5), dx, 6.0);
    const auto exact = attached_layer(sqrt_geometry(), jet(1, 1, 0.5), 6.0);
    worst_shape = std::max(worst_shape, sup_deviation(r, exact.height, 2.0, 6.0));
  }
  o.require(worst_shape <= 5e-3, fmt("layer sup %.3g", worst_shape));

  const std::vector<double> dxs{2e-3, 1e-3, 5e-4};
  std::vector<double> wall_errs, layer_errs;
  for (double h : dxs) {
    wall_errs.push_back(std::abs(accrete_wall(sqrt_geometry(), 2.0, h).back().w_p - 1.0 / 27.0));
    const auto r = accrete_free_layer(sqrt_geometry(), DeadGasSpec::with_pressure(2.0, 0.5), h, 6.0);
    layer_errs.push_back(sup_deviation(r, sr::layer_phalf, 2.0, 6.0));
  }
  const double wall_order = measured_order(dxs, wall_errs);
  const double layer_order = measured_order(dxs, layer_errs);
  o.require(wall_order >= 0.9 && wall_order <= 1.1, fmt("wall order %.3f", wall_order));
  o.require(layer_order >= 0.9 && layer_order <= 1.1, fmt("layer order %.3f", layer_order));
  if (o.pass)
    o.detail = fmt("w_p rel %.2g", std::max(wedge_err, wp_err)) + fmt(", mass rel %.2g", m_err) +
               fmt(", layer sup %.2g", worst_shape) + fmt(", orders %.3f", wall_order) +
               fmt("/%.3f", layer_order);
  return o;
}

Outcome regime_logic() {
  Outcome o;
  const Geometry& g = sqrt_geometry();
  const double slope = g.at(2.0).db;
  o.require(classify_regime(g, jet(1, 1, slope)) == JetRegime::Attached, "threshold attached");
  o.require(classify_regime(g, jet(1, 1, std::nextafter(slope, 0.0))) == JetRegime::VacuumBounded,
            "just below threshold");
  o.require(classify_regime(g, jet(1, 1, 0.0)) == JetRegime::VacuumUnbounded, "v = 0");
  o.require(classify_regime(g, jet(1, 1, std::nextafter(0.0, 1.0))) == JetRegime::VacuumBounded,
            "v = 0+");

  const JetSpec s = jet(1, 1, 0.2);
  const auto vac = vacuum_construction(g, s, 30.0);
  const double x_ref = oracles::collision_x(1.0, 0.2);
  const double slope_ref = sr::layer_p0_slope(x_ref);
  o.require(vac.collision.has_value(), "no collision");
  if (!vac.collision) return o;
  const double dx = std::abs(vac.collision->x - x_ref);
  o.require(dx <= 1e-9, fmt("collision x off by %.3g", dx));
  const auto post = continue_after_collision(g, s, *vac.collision, vac.collision->x + 10.0);
  const double fd = oracles::right_derivative(post.height, vac.collision->x, 1e-3);
  o.require(std::abs(fd - slope_ref) <= 1e-10, fmt("post-collision slope off by %.3g", fd - slope_ref));
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("collision x = %.13f", vac.collision->x) +
              fmt(" (bisection %.13f)", x_ref) + fmt(", h = %.10f", vac.collision->y) +
              fmt(", slope = %.12f", fd) + fmt(" (oracle %.12f)", slope_ref) +
              "; printed literals 9.2386045/2.8619344/0.1394400 differ from the oracle by " +
              fmt("%.2g", std::abs(9.2386045 - x_ref)) + fmt("/%.2g", std::abs(2.8619344 - vac.collision->y)) +
              fmt("/%.2g", std::abs(0.1394400 - slope_ref));
  return o;
}

Outcome entropy_suite() {
  Outcome o;
  const RampProfile root = RampProfile::power(1.0, 0.5);
  int layers = 0;
  for (const JetSpec& s : {jet(1, 1, 0.5), jet(4, 1, 0.5), jet(0.25, 2.0, 1.0)}) {
    const auto sol = solve_problem3(root, s);
    const DiracCurve* layer = sol.find_curve("layer");
    if (!layer) {
      o.require(false, "missing layer");
      continue;
    }
    ++layers;
    for (int i = 0; i < 1000; ++i) {
      const double t = layer->t_begin + (layer->t_end - layer->t_begin) * i / 999.0;
      const auto q = layer->sample(t);
      const double slope = q.dy / q.dx;
      const double d = s.rho * s.v * (q.x - 2.0) - s.rho * s.u * (q.y - std::sqrt(2.0)) + q.y;
      if (!(slope >= 0.0 && slope <= s.v / s.u + 1e-14 && d > 0.0)) {
        o.require(false, fmt("violation at x = %.6g", q.x) + fmt(" rho=%g", s.rho));
        break;
      }
    }
  }
  if (o.pass) o.detail = std::to_string(layers) + " attached layers x 1000 samples";
  return o;
}

}  // namespace

int main() {
  report(1, "printed free-layer shapes", 1.0, printed_shapes);
  report(2, "Newton sine-squared law", 1.0, sine_squared);
  report(3, "ODE versus closed form", 5.0, ode_cross_check);
  report(4, "weak-form verification", 60.0, weak_form);
  report(5, "accretion oracle agreement", 30.0, oracle_agreement);
  report(6, "jet regime logic and collision", 5.0, regime_logic);
  report(7, "entropy and positivity", 5.0, entropy_suite);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
