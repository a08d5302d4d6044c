#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hyflow/interpolation.hpp"

namespace hyflow {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Value and first two derivatives of a ramp profile.
struct ProfileValues {
  double b = 0.0;
  double db = 0.0;
  double d2b = 0.0;
};

// Ramp shape y = b(x) with b(0) = 0 and b' >= 0.
class RampProfile {
 public:
  enum class Kind { Wedge, Power, Polynomial, Tabulated };

  static RampProfile wedge(double slope, double x_end = kInfinity);
  // b = coeff * x^exponent with exponent in (0, 1].
  static RampProfile power(double coeff, double exponent, double x_end = kInfinity);
  // b = sum_k coeffs[k] x^k; coeffs[0] must vanish.
  static RampProfile polynomial(std::vector<double> coeffs, double x_end = kInfinity);
  // Monotone C1 cubic Hermite interpolant through sorted samples.
  static RampProfile tabulated(std::vector<double> xs, std::vector<double> bs);
  // Reads a CSV file with header "x,b".
  static RampProfile tabulated_csv(const std::string& path);

  Kind kind() const { return kind_; }
  double x_begin() const { return kind_ == Kind::Tabulated ? table_.nodes().front() : 0.0; }
  double x_end() const { return x_end_; }
  bool contains(double x) const { return x >= x_begin() && x <= x_end_; }

  // Throws DomainError outside [x_begin, x_end]. For Power with exponent < 1 the
  // slope at x = 0 is +inf and the curvature -inf.
  ProfileValues eval(double x) const;

  // Closed-form arc integral when one is known (Wedge, Power with exponent 1/2 or 1).
  std::optional<double> closed_form_arc_integral(double x) const;
  bool vertical_at_origin() const { return kind_ == Kind::Power && exponent_ < 1.0; }

  double slope() const { return slope_; }
  double coeff() const { return coeff_; }
  double exponent() const { return exponent_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  const std::vector<double>& sample_x() const { return table_.nodes(); }
  const std::vector<double>& sample_b() const { return table_.values(); }

 private:
  Kind kind_ = Kind::Wedge;
  double x_end_ = kInfinity;
  double slope_ = 0.0;
  double coeff_ = 0.0;
  double exponent_ = 1.0;
  std::vector<double> coeffs_;
  HermiteTable table_;
};

ProfileValues eval_profile(const RampProfile& profile, double x);

// H(x) = integral over [0, x] of b'/sqrt(1+b'^2).
double arc_integral_H(const RampProfile& profile, double x, double tol = 1e-10);

struct AdmissibilitySample {
  double x = 0.0;
  bool slope_ok = false;      // b' >= 0
  bool curvature_ok = false;  // b''H + b'^2 sqrt(1+b'^2) > 0
  double margin = 0.0;        // b''H + b'^2 sqrt(1+b'^2)
};

struct AdmissibilityReport {
  bool admissible = true;
  std::optional<double> first_failure;
  std::vector<AdmissibilitySample> samples;
};

// Samples n points uniformly on [x_lo, x_hi] (x_lo only when n == 1).
AdmissibilityReport check_admissibility(const RampProfile& profile, double x_lo, double x_hi,
                                        int n_samples, double tol = 1e-10);

// Immutable wrapper bundling a profile with the quadrature tolerance used for H.
// Nothing is memoized, so concurrent use needs no synchronization.
class Geometry {
 public:
  explicit Geometry(RampProfile profile, double tol = 1e-10);

  const RampProfile& profile() const { return profile_; }
  double tol() const { return tol_; }
  ProfileValues at(double x) const { return profile_.eval(x); }
  double b(double x) const { return profile_.eval(x).b; }
  double H(double x) const { return arc_integral_H(profile_, x, tol_); }
  // Inner unit normal (-b', 1)/sqrt(1+b'^2) of the wall.
  std::array<double, 2> normal(double x) const;

 private:
  RampProfile profile_;
  double tol_;
};

}  // namespace hyflow
