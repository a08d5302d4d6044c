#include "hyflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hyflow/error.hpp"
#include "hyflow/interpolation.hpp"
#include "hyflow/quadrature.hpp"

namespace hyflow {
namespace {

// Fritsch-Carlson limiting so the Hermite interpolant stays monotone.
void limit_monotone(const std::vector<double>& xs, const std::vector<double>& ys,
                    std::vector<double>& ds) {
  const std::size_t n = xs.size();
  for (double& d : ds) d = std::max(d, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double secant = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
    if (secant == 0.0) {
      ds[k] = ds[k + 1] = 0.0;
      continue;
    }
    const double alpha = ds[k] / secant;
    const double beta = ds[k + 1] / secant;
    const double radius = std::hypot(alpha, beta);
    if (radius > 3.0) {
      ds[k] = 3.0 / radius * alpha * secant;
      ds[k + 1] = 3.0 / radius * beta * secant;
    }
  }
}

}  // namespace

RampProfile RampProfile::wedge(double slope, double x_end) {
  if (!(slope >= 0.0) || !std::isfinite(slope)) throw DomainError("wedge slope must be >= 0");
  if (!(x_end > 0.0)) throw DomainError("ramp x_end must be positive");
  RampProfile p;
  p.kind_ = Kind::Wedge;
  p.slope_ = slope;
  p.x_end_ = x_end;
  return p;
}

RampProfile RampProfile::power(double coeff, double exponent, double x_end) {
  if (!(exponent > 0.0 && exponent <= 1.0)) throw DomainError("power exponent must lie in (0, 1]");
  if (!(coeff >= 0.0) || !std::isfinite(coeff)) throw DomainError("power coefficient must be >= 0");
  if (!(x_end > 0.0)) throw DomainError("ramp x_end must be positive");
  RampProfile p;
  p.kind_ = Kind::Power;
  p.coeff_ = coeff;
  p.exponent_ = exponent;
  p.x_end_ = x_end;
  return p;
}

RampProfile RampProfile::polynomial(std::vector<double> coeffs, double x_end) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (coeffs[0] != 0.0) throw DomainError("polynomial ramp must satisfy b(0) = 0");
  if (!(x_end > 0.0)) throw DomainError("ramp x_end must be positive");
  RampProfile p;
  p.kind_ = Kind::Polynomial;
  p.coeffs_ = std::move(coeffs);
  p.x_end_ = x_end;
  return p;
}

RampProfile RampProfile::tabulated(std::vector<double> xs, std::vector<double> bs) {
  if (xs.size() != bs.size()) throw DomainError("tabulated ramp: x and b sizes differ");
  if (xs.size() < 3) throw DomainError("tabulated ramp needs at least 3 samples");
  if (xs.front() < 0.0) throw DomainError("tabulated ramp must start at x >= 0");
  if (xs.front() == 0.0 && bs.front() != 0.0)
    throw DomainError("tabulated ramp must satisfy b(0) = 0");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw DomainError("tabulated ramp: x must be strictly increasing");
    if (bs[i] < bs[i - 1]) throw DomainError("tabulated ramp: b must be nondecreasing");
  }
  RampProfile p;
  p.kind_ = Kind::Tabulated;
  p.x_end_ = xs.back();
  p.table_ = HermiteTable::from_samples(std::move(xs), std::move(bs));
  limit_monotone(p.table_.nodes(), p.table_.values(), p.table_.derivatives());
  return p;
}

RampProfile RampProfile::tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open ramp table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DomainError("ramp table '" + path + "' is empty");
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "x,b") throw DomainError("ramp table '" + path + "' must have header x,b");
  std::vector<double> xs, bs;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string xs_field, bs_field;
    if (!std::getline(fields, xs_field, ',') || !std::getline(fields, bs_field))
      throw DomainError("ramp table '" + path + "' row " + std::to_string(row) + " malformed");
    try {
      xs.push_back(std::stod(xs_field));
      bs.push_back(std::stod(bs_field));
    } catch (const std::exception&) {
      throw DomainError("ramp table '" + path + "' row " + std::to_string(row) + " malformed");
    }
  }
  return tabulated(std::move(xs), std::move(bs));
}

ProfileValues RampProfile::eval(double x) const {
  if (!(x >= x_begin() && x <= x_end_))
    throw DomainError("x = " + std::to_string(x) + " outside ramp domain");
  switch (kind_) {
    case Kind::Wedge:
      return {slope_ * x, slope_, 0.0};
    case Kind::Power: {
      if (exponent_ == 1.0) return {coeff_ * x, coeff_, 0.0};
      if (x == 0.0) return {0.0, coeff_ > 0 ? kInfinity : 0.0, coeff_ > 0 ? -kInfinity : 0.0};
      const double b = coeff_ * std::pow(x, exponent_);
      return {b, exponent_ * b / x, exponent_ * (exponent_ - 1.0) * b / (x * x)};
    }
    case Kind::Polynomial: {
      ProfileValues v;
      for (std::size_t k = coeffs_.size(); k-- > 0;) {
        v.d2b = v.d2b * x + 2.0 * v.db;
        v.db = v.db * x + v.b;
        v.b = v.b * x + coeffs_[k];
      }
      return v;
    }
    case Kind::Tabulated: {
      const HermiteValue v = table_.eval(x);
      return {v.value, v.slope, v.curvature};
    }
  }
  return {};
}

std::optional<double> RampProfile::closed_form_arc_integral(double x) const {
  if (kind_ == Kind::Wedge || (kind_ == Kind::Power && exponent_ == 1.0)) {
    const double k = kind_ == Kind::Wedge ? slope_ : coeff_;
    return x * k / std::sqrt(1.0 + k * k);
  }
  if (kind_ == Kind::Power && exponent_ == 0.5) {
    // (c/2)(sqrt(4x + c^2) - c), rationalized.
    const double c = coeff_;
    if (c == 0.0) return 0.0;
    return 2.0 * c * x / (std::sqrt(4.0 * x + c * c) + c);
  }
  return std::nullopt;
}

ProfileValues eval_profile(const RampProfile& profile, double x) { return profile.eval(x); }

double arc_integral_H(const RampProfile& profile, double x, double tol) {
  if (!(tol > 0.0)) throw DomainError("arc_integral_H: tolerance must be positive");
  if (!(x >= 0.0 && x <= profile.x_end()))
    throw DomainError("arc_integral_H: x = " + std::to_string(x) + " outside ramp domain");
  if (x == 0.0) return 0.0;
  if (auto closed = profile.closed_form_arc_integral(x)) return *closed;
  if (profile.x_begin() > 0.0)
    throw DomainError("arc_integral_H: tabulated ramp does not start at x = 0");
  auto integrand = [&](double t) {
    const double db = profile.eval(t).db;
    if (std::isinf(db)) return 1.0;
    return db / std::sqrt(1.0 + db * db);
  };
  return integrate_adaptive(integrand, 0.0, x, {tol, 0.0, 4000}).value;
}

AdmissibilityReport check_admissibility(const RampProfile& profile, double x_lo, double x_hi,
                                        int n_samples, double tol) {
  if (x_lo < 0.0) throw DomainError("check_admissibility: x_lo must be >= 0");
  AdmissibilityReport report;
  for (int i = 0; i < n_samples; ++i) {
    const double x = n_samples == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (n_samples - 1);
    AdmissibilitySample s;
    s.x = x;
    const ProfileValues v = profile.eval(x);
    s.slope_ok = v.db >= 0.0;
    if (std::isinf(v.db)) {
      // Vertical tangent at the origin: the b'^3 term dominates b''H.
      s.margin = kInfinity;
    } else {
      const double H = arc_integral_H(profile, x, tol);
      s.margin = v.d2b * H + v.db * v.db * std::sqrt(1.0 + v.db * v.db);
    }
    s.curvature_ok = s.margin > 0.0;
    if (!(s.slope_ok && s.curvature_ok) && report.admissible) {
      report.admissible = false;
      report.first_failure = x;
    }
    report.samples.push_back(s);
  }
  return report;
}

Geometry::Geometry(RampProfile profile, double tol) : profile_(std::move(profile)), tol_(tol) {
  if (!(tol > 0.0)) throw DomainError("Geometry: tolerance must be positive");
}

std::array<double, 2> Geometry::normal(double x) const {
  const double db = profile_.eval(x).db;
  if (std::isinf(db)) return {-1.0, 0.0};
  const double norm = std::sqrt(1.0 + db * db);
  return {-db / norm, 1.0 / norm};
}

}  // namespace hyflow
