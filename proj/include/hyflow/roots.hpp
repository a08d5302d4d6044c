#pragma once

#include <functional>

namespace hyflow {

struct RootOptions {
  double x_tol = 1e-14;
  int max_iterations = 200;
};

// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
double find_root(const std::function<double(double)>& f, double a, double b,
                 const RootOptions& options = {});

// Plain bisection; used where a formula-independent reference is wanted.
double bisect(const std::function<double(double)>& f, double a, double b,
              const RootOptions& options = {});

}  // namespace hyflow
