#pragma once

#include <functional>

namespace hyflow {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

// Globally adaptive 7/15-point Gauss-Kronrod quadrature on a finite interval.
// Endpoints are never evaluated, so integrable endpoint singularities are fine.
// Throws ConvergenceError when the interval budget is exhausted.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {});

// Composite Simpson rule with n (even, >= 2) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace hyflow
