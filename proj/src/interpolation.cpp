#include "hyflow/interpolation.hpp"

#include <algorithm>

#include "hyflow/error.hpp"

namespace hyflow {

double stencil_derivative(const std::vector<double>& xs, const std::vector<double>& ys,
                          std::size_t i) {
  const std::size_t n = xs.size();
  const std::size_t width = std::min<std::size_t>(5, n);
  std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
  if (lo + width > n) lo = n - width;
  double deriv = 0.0;
  for (std::size_t j = lo; j < lo + width; ++j) {
    double weight;
    if (j == i) {
      weight = 0.0;
      for (std::size_t k = lo; k < lo + width; ++k)
        if (k != i) weight += 1.0 / (xs[i] - xs[k]);
    } else {
      double num = 1.0, den = 1.0;
      for (std::size_t k = lo; k < lo + width; ++k) {
        if (k == j) continue;
        den *= xs[j] - xs[k];
        if (k != i) num *= xs[i] - xs[k];
      }
      weight = num / den;
    }
    deriv += weight * ys[j];
  }
  return deriv;
}

HermiteTable::HermiteTable(std::vector<double> xs, std::vector<double> ys, std::vector<double> ds)
    : xs_(std::move(xs)), ys_(std::move(ys)), ds_(std::move(ds)) {
  if (xs_.size() != ys_.size() || xs_.size() != ds_.size())
    throw DomainError("HermiteTable: column sizes differ");
  if (xs_.size() < 2) throw DomainError("HermiteTable: need at least two nodes");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i] > xs_[i - 1])) throw DomainError("HermiteTable: nodes must be increasing");
}

HermiteTable HermiteTable::from_samples(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw DomainError("HermiteTable: need matching columns with at least two nodes");
  std::vector<double> ds(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ds[i] = stencil_derivative(xs, ys, i);
  return HermiteTable(std::move(xs), std::move(ys), std::move(ds));
}

HermiteValue HermiteTable::eval(double x) const {
  x = std::clamp(x, xs_.front(), xs_.back());
  std::size_t i = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
  i = std::clamp<std::size_t>(i, 1, xs_.size() - 1) - 1;
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double y0 = ys_[i], y1 = ys_[i + 1], m0 = h * ds_[i], m1 = h * ds_[i + 1];
  const double t2 = t * t, t3 = t2 * t;
  HermiteValue v;
  v.value = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
            (t3 - t2) * m1;
  v.slope = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 +
             (3 * t2 - 2 * t) * m1) /
            h;
  v.curvature =
      ((12 * t - 6) * y0 + (6 * t - 4) * m0 + (-12 * t + 6) * y1 + (6 * t - 2) * m1) / (h * h);
  return v;
}

}  // namespace hyflow
