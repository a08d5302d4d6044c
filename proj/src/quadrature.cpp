#include "hyflow/quadrature.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <utility>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "hyflow/error.hpp"

namespace hyflow {
namespace {

// Exceptions must not unwind through GSL frames; park them and rethrow afterwards.
struct Callback {
  const std::function<double(double)>* f;
  std::exception_ptr failure;
  int evaluations = 0;
};

double trampoline(double x, void* data) {
  auto* cb = static_cast<Callback*>(data);
  if (cb->failure) return std::numeric_limits<double>::quiet_NaN();
  ++cb->evaluations;
  try {
    return (*cb->f)(x);
  } catch (...) {
    cb->failure = std::current_exception();
    return std::numeric_limits<double>::quiet_NaN();
  }
}

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options) {
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;

  QuadratureResult result;
  if (a == b) return result;
  const std::size_t limit = static_cast<std::size_t>(std::max(options.max_intervals, 1));
  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> work(
      gsl_integration_workspace_alloc(limit));
  if (!work) throw Error("quadrature workspace allocation failed");

  Callback cb{&f, nullptr, 0};
  gsl_function fn{&trampoline, &cb};
  double value = 0.0, abs_error = 0.0;
  const int status = gsl_integration_qag(&fn, a, b, options.abs_tol, options.rel_tol, limit,
                                         GSL_INTEG_GAUSS15, work.get(), &value, &abs_error);
  if (cb.failure) std::rethrow_exception(cb.failure);
  if (!std::isfinite(value)) throw ConvergenceError("quadrature produced a non-finite value");
  if (status == GSL_EMAXITER) throw ConvergenceError("quadrature interval budget exhausted");
  // Roundoff and bad-integrand flags still carry the best attainable estimate.
  if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_ESING)
    throw ConvergenceError(std::string("quadrature failed: ") + gsl_strerror(status));

  result.value = value;
  result.abs_error = abs_error;
  result.evaluations = cb.evaluations;
  result.intervals = static_cast<int>(work->size);
  return result;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n < 2 || n % 2 != 0) throw DomainError("simpson: panel count must be even and >= 2");
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

}  // namespace hyflow
