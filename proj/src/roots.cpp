#include "hyflow/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/policies/policy.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "hyflow/error.hpp"

namespace hyflow {
namespace {

using namespace boost::math::policies;
using ThrowingPolicy = policy<evaluation_error<throw_on_error>>;

// Stops when the bracket is within x_tol or no double lies strictly inside it.
struct Tolerance {
  double x_tol;
  bool operator()(double a, double b) const {
    const double lo = std::min(a, b), hi = std::max(a, b);
    return hi - lo <= x_tol || std::nextafter(lo, hi) >= hi;
  }
};

// Returns true (and sets x) when an endpoint is already a root.
bool bracket(const std::function<double(double)>& f, double a, double b, double& fa, double& fb,
             double& x, const char* who) {
  fa = f(a);
  fb = f(b);
  if (fa == 0.0) {
    x = a;
    return true;
  }
  if (fb == 0.0) {
    x = b;
    return true;
  }
  if ((fa > 0) == (fb > 0)) throw DomainError(std::string(who) + ": interval does not bracket a root");
  return false;
}

}  // namespace

double find_root(const std::function<double(double)>& f, double a, double b,
                 const RootOptions& options) {
  double fa, fb, x;
  if (bracket(f, a, b, fa, fb, x, "find_root")) return x;
  if (b < a) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  std::uintmax_t iterations = static_cast<std::uintmax_t>(options.max_iterations);
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, Tolerance{options.x_tol},
                                                   iterations, ThrowingPolicy());
  if (static_cast<int>(iterations) >= options.max_iterations)
    throw ConvergenceError("find_root: iteration budget exhausted", 0.5 * (r.first + r.second));
  // Report the endpoint with the smaller residual.
  return std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
}

double bisect(const std::function<double(double)>& f, double a, double b,
              const RootOptions& options) {
  double fa, fb, x;
  if (bracket(f, a, b, fa, fb, x, "bisect")) return x;
  std::uintmax_t iterations = static_cast<std::uintmax_t>(options.max_iterations);
  const auto r = boost::math::tools::bisect(f, std::min(a, b), std::max(a, b),
                                            Tolerance{options.x_tol}, iterations, ThrowingPolicy());
  return 0.5 * (r.first + r.second);
}

}  // namespace hyflow
