#include "hyflow/weak_verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "hyflow/error.hpp"

namespace hyflow {

namespace {

double bump(double s) {
  if (!(std::abs(s) < 1.0)) return 0.0;
  const double q = 1.0 - s * s;
  return q * q;
}

double bump_slope(double s) {
  if (!(std::abs(s) < 1.0)) return 0.0;
  return -4.0 * s * (1.0 - s * s);
}

// Antiderivative of bump from -1, clamped to [-1, 1].
double bump_integral(double s) {
  if (std::isnan(s)) return 0.0;
  s = std::clamp(s, -1.0, 1.0);
  const double s3 = s * s * s;
  return s - 2.0 * s3 / 3.0 + s3 * s * s / 5.0 + 8.0 / 15.0;
}

double clamp_unit(double s) {
  if (std::isnan(s)) return s;
  return std::clamp(s, -1.0, 1.0);
}

// Points in (a, b) where g(t) crosses any target level, located by sampling and bisection.
template <class G>
std::vector<double> crossings(const G& g, double a, double b, const std::array<double, 2>& targets,
                              int samples = 48) {
  std::vector<double> out;
  if (!(b > a)) return out;
  std::vector<double> ts(samples + 1), gs(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    ts[i] = a + (b - a) * i / samples;
    gs[i] = g(ts[i]);
  }
  for (double level : targets) {
    for (int i = 0; i < samples; ++i) {
      const double f0 = gs[i] - level, f1 = gs[i + 1] - level;
      if (!std::isfinite(f0) || !std::isfinite(f1)) continue;
      if (f0 == 0.0 && i > 0) {
        out.push_back(ts[i]);
        continue;
      }
      if ((f0 < 0.0) == (f1 < 0.0) || f1 == 0.0) continue;
      double lo = ts[i], hi = ts[i + 1];
      const bool rising = f0 < 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) - level < 0.0) == rising) lo = mid; else hi = mid;
      }
      out.push_back(0.5 * (lo + hi));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Composite Simpson over [a, b] split at breakpoints. A piece of physical length L
// (L = parameter length times stretch) gets 2 ceil(max(L, r) / 2h) panels, so every
// piece, however short, is refined when h halves.
template <class F, std::size_t N>
void simpson_pieces(const F& f, double a, double b, std::vector<double> breaks, double stretch,
                    double r, double h, std::array<double, N>& acc) {
  breaks.insert(breaks.begin(), a);
  breaks.push_back(b);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p], hi = breaks[p + 1];
    if (!(hi > lo)) continue;
    const double length = std::max((hi - lo) * stretch, r);
    const int n = std::max(2, 2 * static_cast<int>(std::ceil(length / (2.0 * h))));
    const double dx = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const auto v = f(lo + dx * i);
      for (std::size_t k = 0; k < N; ++k) acc[k] += w * dx / 3.0 * v[k];
    }
  }
}

// Smallest t in [lo, hi] with x(t) >= target for nondecreasing x.
template <class X>
double first_reaching(const X& x, double lo, double hi, double target) {
  if (x(lo) >= target) return lo;
  if (x(hi) < target) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (x(mid) >= target) hi = mid; else lo = mid;
  }
  return hi;
}

void add_term(std::array<ResidualValue, 4>& out, const std::array<double, 4>& term) {
  for (int k = 0; k < 4; ++k) {
    out[k].value += term[k];
    out[k].scale += std::abs(term[k]);
  }
}

std::array<double, 4> region_term(const BulkRegion& region, const TestFunction& phi, double h) {
  std::array<double, 4> acc{};
  const double r = phi.radius;
  const double a = std::max(region.x_lo, phi.cx - r);
  const double b = std::min(region.x_hi, phi.cx + r);
  if (!(b > a)) return acc;
  const auto gx = region.state.x_flux();
  const auto gy = region.state.y_flux();
  const std::array<double, 2> levels = {phi.cy - r, phi.cy + r};
  auto breaks = crossings([&](double x) { return region.lower(x); }, a, b, levels);
  auto more = crossings([&](double x) { return region.upper(x); }, a, b, levels);
  breaks.insert(breaks.end(), more.begin(), more.end());
  std::sort(breaks.begin(), breaks.end());
  auto integrand = [&](double x) {
    std::array<double, 4> out{};
    const double lo = region.lower(x), hi = region.upper(x);
    if (!(hi > lo)) return out;
    const double xi = (x - phi.cx) / r;
    const double eta_lo = (lo - phi.cy) / r, eta_hi = (hi - phi.cy) / r;
    const double across_x = bump_slope(xi) * (bump_integral(eta_hi) - bump_integral(eta_lo));
    const double across_y = bump(xi) * (bump(clamp_unit(eta_hi)) - bump(clamp_unit(eta_lo)));
    for (int k = 0; k < 4; ++k) {
      if (across_x != 0.0) out[k] += gx[k] * across_x;
      if (across_y != 0.0) out[k] += gy[k] * across_y;
    }
    return out;
  };
  simpson_pieces(integrand, a, b, breaks, 1.0, r, h, acc);
  return acc;
}

template <class Sampler>
std::array<double, 2> clipped_range(const Sampler& sample, double t0, double t1,
                                    const TestFunction& phi) {
  auto x = [&](double t) { return sample(t).x; };
  const double ta = first_reaching(x, t0, t1, phi.cx - phi.radius);
  const double tb = first_reaching(x, t0, t1, phi.cx + phi.radius);
  return {ta, tb};
}

template <class Sampler>
std::vector<double> curve_breaks(const Sampler& sample, double ta, double tb,
                                 const TestFunction& phi) {
  const std::array<double, 2> levels = {phi.cy - phi.radius, phi.cy + phi.radius};
  return crossings([&](double t) { return sample(t).y; }, ta, tb, levels);
}

// Physical length per unit parameter, from a 16-chord polyline.
template <class Sampler>
double parameter_stretch(const Sampler& sample, double ta, double tb) {
  constexpr int n = 16;
  double length = 0.0;
  auto prev = sample(ta);
  for (int i = 1; i <= n; ++i) {
    const auto cur = sample(ta + (tb - ta) * i / n);
    length += std::hypot(cur.x - prev.x, cur.y - prev.y);
    prev = cur;
  }
  if (!(length > 0.0) || !std::isfinite(length)) return 0.0;
  return length / (tb - ta);
}

std::array<double, 4> curve_term(const DiracCurve& curve, const TestFunction& phi, double h) {
  std::array<double, 4> acc{};
  const auto range = clipped_range(curve.sample, curve.t_begin, curve.t_end, phi);
  if (!(range[1] > range[0])) return acc;
  const double r = phi.radius;
  auto integrand = [&](double t) {
    std::array<double, 4> out{};
    const CurveSample s = curve.sample(t);
    const double xi = (s.x - phi.cx) / r, eta = (s.y - phi.cy) / r;
    const double px = bump_slope(xi) * bump(eta) / r;
    const double py = bump(xi) * bump_slope(eta) / r;
    if (px == 0.0 && py == 0.0) return out;
    const double speed = s.speed();
    for (int k = 0; k < 4; ++k) out[k] = (s.w_m[k] * px + s.w_n[k] * py) * speed;
    return out;
  };
  simpson_pieces(integrand, range[0], range[1], curve_breaks(curve.sample, range[0], range[1], phi),
                 parameter_stretch(curve.sample, range[0], range[1]), r, h, acc);
  return acc;
}

std::array<double, 4> load_term(const WallLoad& load, const TestFunction& phi, double h) {
  std::array<double, 4> acc{};
  const auto range = clipped_range(load.sample, load.t_begin, load.t_end, phi);
  if (!(range[1] > range[0])) return acc;
  auto integrand = [&](double t) {
    std::array<double, 4> out{};
    const PressureSample s = load.sample(t);
    const double weight = phi.value(s.x, s.y);
    if (weight == 0.0) return out;
    const double scaled = s.w_p * weight * std::hypot(s.dx, s.dy);
    out[1] = scaled * s.normal[0];
    out[2] = scaled * s.normal[1];
    return out;
  };
  simpson_pieces(integrand, range[0], range[1], curve_breaks(load.sample, range[0], range[1], phi),
                 parameter_stretch(load.sample, range[0], range[1]), phi.radius, h, acc);
  return acc;
}

std::array<double, 4> line_term(const BoundaryLine& line, const TestFunction& phi) {
  std::array<double, 4> out{};
  const double r = phi.radius;
  const double across = bump((line.x - phi.cx) / r);
  if (across == 0.0) return out;
  const double along = r * (bump_integral((line.y_hi - phi.cy) / r) -
                            bump_integral((line.y_lo - phi.cy) / r));
  for (int k = 0; k < 4; ++k) out[k] = line.flux[k] * across * along;
  return out;
}

double& weight_ref(CurveSample& s, WeightField field) {
  switch (field) {
    case WeightField::M0: return s.w_m[0];
    case WeightField::N0: return s.w_n[0];
    case WeightField::M1: return s.w_m[1];
    case WeightField::N1: return s.w_n[1];
    case WeightField::M2: return s.w_m[2];
    case WeightField::N2: return s.w_n[2];
    case WeightField::M3: return s.w_m[3];
    case WeightField::N3: return s.w_n[3];
    case WeightField::Rho: return s.w_rho;
  }
  return s.w_rho;
}

double max_norm_distance(const TestFunction& phi, const std::array<double, 2>& p) {
  return std::max(std::abs(p[0] - phi.cx), std::abs(p[1] - phi.cy));
}

// Largest radius <= wanted keeping a centre admissible, or 0.
double admissible_radius(const MeasureSolution& solution, double cx, double cy, double wanted) {
  double r = wanted;
  if (std::isfinite(solution.x_limit)) r = std::min(r, 0.95 * (solution.x_limit - cx));
  // Keep a gap of one radius to singular points: nearby curvature is unresolved otherwise.
  for (const auto& p : solution.singular_points)
    r = std::min(r, 0.5 * std::max(std::abs(p[0] - cx), std::abs(p[1] - cy)));
  return r;
}

}  // namespace

std::string to_string(Identity identity) {
  switch (identity) {
    case Identity::Mass: return "mass";
    case Identity::MomentumX: return "momentum_x";
    case Identity::MomentumY: return "momentum_y";
    case Identity::Energy: return "energy";
  }
  return "unknown";
}

double TestFunction::value(double x, double y) const {
  return bump((x - cx) / radius) * bump((y - cy) / radius);
}

std::array<double, 2> TestFunction::gradient(double x, double y) const {
  const double xi = (x - cx) / radius, eta = (y - cy) / radius;
  return {bump_slope(xi) * bump(eta) / radius, bump(xi) * bump_slope(eta) / radius};
}

bool test_function_admissible(const MeasureSolution& solution, const TestFunction& phi) {
  if (!(phi.radius > 0.0) || !std::isfinite(phi.cx) || !std::isfinite(phi.cy)) return false;
  if (!(phi.cx + phi.radius < solution.x_limit)) return false;
  for (const auto& p : solution.singular_points)
    if (!(max_norm_distance(phi, p) > phi.radius)) return false;
  return true;
}

std::array<ResidualValue, 4> residuals(const MeasureSolution& solution, const TestFunction& phi,
                                       double h) {
  if (!test_function_admissible(solution, phi))
    throw DomainError("test function support leaves the domain of definition or covers a "
                      "singular point");
  if (!(h > 0.0) || 2.0 * phi.radius / h < 4.0 - 1e-12)
    throw DomainError("quadrature step resolves the test-function support with fewer than 4 steps");
  std::array<ResidualValue, 4> out{};
  for (const auto& region : solution.regions) add_term(out, region_term(region, phi, h));
  for (const auto& curve : solution.curves) add_term(out, curve_term(curve, phi, h));
  for (const auto& load : solution.loads) add_term(out, load_term(load, phi, h));
  for (const auto& line : solution.lines) add_term(out, line_term(line, phi));
  for (const auto& v : out)
    if (!std::isfinite(v.value)) throw Error("non-finite weak residual");
  return out;
}

double residual(const MeasureSolution& solution, Identity identity, const TestFunction& phi,
                double h) {
  return residuals(solution, phi, h)[static_cast<int>(identity)].value;
}

RadonNikodymReport radon_nikodym_check(const MeasureSolution& solution, int n_samples) {
  if (solution.curves.empty()) throw DomainError("solution has no concentration curve");
  if (n_samples < 2) throw DomainError("at least 2 samples are required");
  RadonNikodymReport report;
  for (const auto& curve : solution.curves) {
    for (int i = 0; i < n_samples; ++i) {
      const double t = curve.t_begin + (curve.t_end - curve.t_begin) * i / (n_samples - 1);
      CurveSample s;
      try {
        s = curve.sample(t);
      } catch (const Error&) {
        ++report.skipped;
        continue;
      }
      const double speed = s.speed();
      bool finite = std::isfinite(speed) && speed > 0.0;
      for (int k = 0; k < 4; ++k) finite = finite && std::isfinite(s.w_m[k]) && std::isfinite(s.w_n[k]);
      if (!finite) {
        ++report.skipped;
        continue;
      }
      for (int k = 0; k < 4; ++k)
        report.slip_deviation =
            std::max(report.slip_deviation, std::abs(s.w_n[k] * s.dx - s.w_m[k] * s.dy) / speed);
      const std::array<double, 3> targets = {s.u, s.v, s.E};
      bool any = false;
      for (const auto* w : {&s.w_m, &s.w_n}) {
        if ((*w)[0] == 0.0) continue;
        any = true;
        for (int k = 1; k < 4; ++k)
          report.curve_deviation =
              std::max(report.curve_deviation, std::abs((*w)[k] / (*w)[0] - targets[k - 1]));
      }
      if (s.w_rho > 0.0)
        report.curve_deviation =
            std::max(report.curve_deviation, std::abs(s.w_m[0] / s.w_rho - s.u));
      if (any) ++report.checked; else ++report.skipped;
    }
  }
  for (const auto& region : solution.regions)
    report.pressure_deviation = std::max(
        report.pressure_deviation, std::abs(region.state.p - region.state.state_relation_pressure()));
  return report;
}

bool WeakResidualReport::fit_passes(const ResidualFit& fit, const VerifyThresholds& t) const {
  if (!(fit.finest <= t.max_finest)) return false;
  if (fit.at_rounding || fit.finest <= t.exact_floor) return true;
  return fit.order && *fit.order >= t.min_order;
}

bool WeakResidualReport::passes(const VerifyThresholds& t) const {
  if (fits.empty()) return false;
  return std::all_of(fits.begin(), fits.end(), [&](const ResidualFit& f) { return fit_passes(f, t); });
}

WeakResidualReport convergence_study(const MeasureSolution& solution,
                                     const std::vector<TestFunction>& grid, int levels,
                                     int threads) {
  if (levels < 3) throw DomainError("convergence study needs at least 3 levels");
  for (const auto& phi : grid)
    if (!test_function_admissible(solution, phi))
      throw DomainError("test function support leaves the domain of definition or covers a "
                        "singular point");
  const std::size_t tasks = grid.size() * static_cast<std::size_t>(levels);
  std::vector<std::array<ResidualValue, 4>> results(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      const auto& phi = grid[i / levels];
      const int level = static_cast<int>(i % levels);
      try {
        results[i] = residuals(solution, phi, phi.radius / std::ldexp(4.0, level));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned n = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(tasks, 1))));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  WeakResidualReport report;
  report.levels = levels;
  report.x_limit = solution.x_limit;
  constexpr double kFloor = 128.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (Identity id : kIdentities) {
      const int k = static_cast<int>(id);
      ResidualFit fit{id, grid[g], std::nullopt, 0.0, 0.0, false};
      std::vector<double> lx, ly;
      for (int level = 0; level < levels; ++level) {
        const auto& value = results[g * levels + level][k];
        const double h = grid[g].radius / std::ldexp(4.0, level);
        report.entries.push_back({id, grid[g], level, h, value.value, value.scale});
        fit.scale = std::max(fit.scale, value.scale);
        if (std::abs(value.value) > kFloor * value.scale) {
          lx.push_back(std::log(h));
          ly.push_back(std::log(std::abs(value.value)));
        }
      }
      fit.finest = std::abs(results[g * levels + levels - 1][k].value);
      if (lx.size() < 3) {
        fit.at_rounding = true;
      } else {
        const double m = static_cast<double>(lx.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
          sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
        }
        fit.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      }
      report.fits.push_back(fit);
    }
  }
  return report;
}

std::vector<TestFunction> standard_test_grid(const MeasureSolution& solution, double radius,
                                             int per_curve) {
  std::vector<TestFunction> grid;
  constexpr double kMinRadius = 1e-3;
  auto add = [&](double cx, double cy) {
    const double r = admissible_radius(solution, cx, cy, radius);
    if (!(r >= kMinRadius)) return;
    TestFunction phi{cx, cy, r};
    if (test_function_admissible(solution, phi)) grid.push_back(phi);
  };
  for (const auto& curve : solution.curves) {
    for (int i = 0; i < per_curve; ++i) {
      const double t = curve.t_begin + (curve.t_end - curve.t_begin) * (i + 0.5) / per_curve;
      CurveSample s;
      try {
        s = curve.sample(t);
      } catch (const Error&) {
        continue;
      }
      if (!std::isfinite(s.x) || !std::isfinite(s.y)) continue;
      add(s.x, s.y);
      const double r = admissible_radius(solution, s.x, s.y, radius);
      if (r >= kMinRadius) {
        add(s.x, s.y + 0.6 * r);
        add(s.x, s.y - 0.6 * r);
      }
    }
  }
  for (const auto& line : solution.lines) {
    if (std::isfinite(line.y_lo)) add(line.x, line.y_lo + 1.5 * radius);
    if (std::isfinite(line.y_hi)) {
      add(line.x, line.y_hi);
      add(line.x, line.y_hi - 1.5 * radius);
    }
  }
  return grid;
}

std::vector<TestFunction> lattice_test_grid(const MeasureSolution& solution, double x_lo,
                                            double x_hi, double y_lo, double y_hi, int nx, int ny,
                                            double radius) {
  std::vector<TestFunction> grid;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double cx = nx == 1 ? 0.5 * (x_lo + x_hi) : x_lo + (x_hi - x_lo) * i / (nx - 1);
      const double cy = ny == 1 ? 0.5 * (y_lo + y_hi) : y_lo + (y_hi - y_lo) * j / (ny - 1);
      TestFunction phi{cx, cy, radius};
      if (test_function_admissible(solution, phi)) grid.push_back(phi);
    }
  }
  return grid;
}

MeasureSolution perturb_curve_weight(const MeasureSolution& solution, std::size_t curve,
                                     WeightField field, double factor) {
  if (curve >= solution.curves.size()) throw DomainError("curve index out of range");
  MeasureSolution out = solution;
  auto base = solution.curves[curve].sample;
  out.curves[curve].sample = [base, field, factor](double t) {
    CurveSample s = base(t);
    weight_ref(s, field) *= factor;
    return s;
  };
  return out;
}

MeasureSolution perturb_wall_pressure(const MeasureSolution& solution, double factor) {
  if (solution.loads.empty()) throw DomainError("solution has no wall load");
  MeasureSolution out = solution;
  for (auto& load : out.loads) {
    auto base = load.sample;
    load.sample = [base, factor](double t) {
      PressureSample s = base(t);
      s.w_p *= factor;
      return s;
    };
  }
  return out;
}

MeasureSolution scale_measures(const MeasureSolution& solution, double alpha) {
  MeasureSolution out = solution;
  for (auto& region : out.regions) {
    region.state.rho *= alpha;
    region.state.p *= alpha;
  }
  for (auto& curve : out.curves) {
    auto base = curve.sample;
    curve.sample = [base, alpha](double t) {
      CurveSample s = base(t);
      for (int k = 0; k < 4; ++k) {
        s.w_m[k] *= alpha;
        s.w_n[k] *= alpha;
      }
      s.w_rho *= alpha;
      return s;
    };
  }
  for (auto& load : out.loads) {
    auto base = load.sample;
    load.sample = [base, alpha](double t) {
      PressureSample s = base(t);
      s.w_p *= alpha;
      return s;
    };
  }
  for (auto& line : out.lines) {
    for (auto& f : line.flux) f *= alpha;
    if (line.state) {
      line.state->rho *= alpha;
      line.state->p *= alpha;
    }
    line.pressure *= alpha;
  }
  return out;
}

}  // namespace hyflow
