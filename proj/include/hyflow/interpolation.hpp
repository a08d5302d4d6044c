#pragma once

#include <cstddef>
#include <vector>

namespace hyflow {

struct HermiteValue {
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
};

// Piecewise cubic Hermite interpolant on strictly increasing nodes.
class HermiteTable {
 public:
  HermiteTable() = default;
  // Node derivatives supplied by the caller.
  HermiteTable(std::vector<double> xs, std::vector<double> ys, std::vector<double> ds);
  // Node derivatives estimated from five-point Lagrange stencils (fourth order).
  static HermiteTable from_samples(std::vector<double> xs, std::vector<double> ys);

  // Clamps x to the node range.
  HermiteValue eval(double x) const;
  double operator()(double x) const { return eval(x).value; }

  const std::vector<double>& nodes() const { return xs_; }
  const std::vector<double>& values() const { return ys_; }
  std::vector<double>& derivatives() { return ds_; }
  const std::vector<double>& derivatives() const { return ds_; }
  bool empty() const { return xs_.empty(); }

 private:
  std::vector<double> xs_, ys_, ds_;
};

// Derivative at xs[i] of the Lagrange polynomial through up to five neighbouring nodes.
double stencil_derivative(const std::vector<double>& xs, const std::vector<double>& ys,
                          std::size_t i);

}  // namespace hyflow
