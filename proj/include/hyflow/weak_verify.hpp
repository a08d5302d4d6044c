#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hyflow/measure.hpp"

namespace hyflow {

enum class Identity { Mass = 0, MomentumX = 1, MomentumY = 2, Energy = 3 };
constexpr std::array<Identity, 4> kIdentities = {Identity::Mass, Identity::MomentumX,
                                                 Identity::MomentumY, Identity::Energy};
std::string to_string(Identity identity);

// phi(x, y) = B((x-c)/r) B((y-d)/r) with B(s) = (1-s^2)^2 on |s| <= 1.
struct TestFunction {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;

  double value(double x, double y) const;
  std::array<double, 2> gradient(double x, double y) const;
};

// Residual of one identity with the sum of absolute term contributions as its scale.
struct ResidualValue {
  double value = 0.0;
  double scale = 0.0;
};

// Residuals of all four identities with quadrature step h.
// Throws DomainError when the support leaves the domain of definition, contains a
// singular point, or is resolved by fewer than 4 steps.
std::array<ResidualValue, 4> residuals(const MeasureSolution& solution, const TestFunction& phi,
                                       double h);
double residual(const MeasureSolution& solution, Identity identity, const TestFunction& phi,
                double h);

// Whether phi may be used with this solution (support inside x < x_limit, away from
// singular points).
bool test_function_admissible(const MeasureSolution& solution, const TestFunction& phi);

struct RadonNikodymReport {
  double curve_deviation = 0.0;     // flux-weight ratios versus (u, v, E), and w_m0 = w_rho u
  double slip_deviation = 0.0;      // |w_n dx - w_m dy| / speed
  double pressure_deviation = 0.0;  // bulk p versus the state relation
  int skipped = 0;                  // samples with vanishing or non-finite denominators
  int checked = 0;
};

// Samples every curve at n_samples uniform parameters. Requires at least one curve.
RadonNikodymReport radon_nikodym_check(const MeasureSolution& solution, int n_samples = 1000);

struct ResidualEntry {
  Identity identity = Identity::Mass;
  TestFunction phi;
  int level = 0;
  double h = 0.0;
  double residual = 0.0;
  double scale = 0.0;
};

struct ResidualFit {
  Identity identity = Identity::Mass;
  TestFunction phi;
  std::optional<double> order;  // log-log slope over levels above the rounding floor
  double finest = 0.0;          // |residual| at the finest level
  double scale = 0.0;
  bool at_rounding = false;     // fewer than 3 levels above the rounding floor
};

struct VerifyThresholds {
  double min_order = 1.9;
  double max_finest = 1e-6;
  // Residuals at or below this pass regardless of order (tabulated data plateau).
  double exact_floor = 0.0;
};

struct WeakResidualReport {
  std::vector<ResidualEntry> entries;
  std::vector<ResidualFit> fits;
  int levels = 0;
  double x_limit = kInfinity;
  bool passes(const VerifyThresholds& thresholds = {}) const;
  bool fit_passes(const ResidualFit& fit, const VerifyThresholds& thresholds = {}) const;
};

// Residuals for every (identity, phi) at h = radius / 2^(level+2), level = 0..levels-1,
// evaluated on worker threads (threads = 0 picks the hardware concurrency).
WeakResidualReport convergence_study(const MeasureSolution& solution,
                                     const std::vector<TestFunction>& grid, int levels,
                                     int threads = 0);

// Test functions centred along every curve, on boundary lines, and in the bulk on both
// sides of each curve; radii shrink to stay admissible.
std::vector<TestFunction> standard_test_grid(const MeasureSolution& solution,
                                             double radius = 0.5, int per_curve = 4);

// nx-by-ny lattice of centres over a box, filtered for admissibility.
std::vector<TestFunction> lattice_test_grid(const MeasureSolution& solution, double x_lo,
                                            double x_hi, double y_lo, double y_hi, int nx, int ny,
                                            double radius);

enum class WeightField { M0, N0, M1, N1, M2, N2, M3, N3, Rho };

// Copies with one field scaled, for detector-sensitivity checks.
MeasureSolution perturb_curve_weight(const MeasureSolution& solution, std::size_t curve,
                                     WeightField field, double factor);
MeasureSolution perturb_wall_pressure(const MeasureSolution& solution, double factor);
// Every measure (bulk fluxes, pressure, curve weights, loads, boundary fluxes) scaled by alpha.
MeasureSolution scale_measures(const MeasureSolution& solution, double alpha);

}  // namespace hyflow
