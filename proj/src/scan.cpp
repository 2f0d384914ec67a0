#include <qbattery/criticality.hpp>
#include <qbattery/errors.hpp>

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace qbattery {

ParamScan::ParamScan(std::string parameter, std::vector<double> x, std::vector<double> y)
    : parameter_(std::move(parameter)), x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw ValidationError("scan x and y differ in length");
  if (x_.size() < 2) throw ValidationError("scan needs at least 2 samples");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw ValidationError(fmt::format("non-finite scan sample at index {} (x = {})", i, x_[i]));
    }
  }
  step_ = (x_.back() - x_.front()) / static_cast<double>(x_.size() - 1);
  if (!(step_ > 0.0)) throw ValidationError("scan parameter must be strictly increasing");
  // Spacing tolerance is relative to the larger of the step and the sample
  // magnitude, so rounding in x_i = x_0 + i h is never flagged.
  double scale = step_;
  for (double v : x_) scale = std::max(scale, std::fabs(v));
  const double tol = 1e-12 * scale;
  for (std::size_t i = 1; i < x_.size(); ++i) {
    const double dx = x_[i] - x_[i - 1];
    if (!(dx > 0.0) || std::fabs(dx - step_) > tol) {
      throw ValidationError(fmt::format("scan spacing not uniform at index {}", i));
    }
  }
}

std::vector<double> midpoint_samples(double start, double stop, std::size_t steps) {
  if (!(start < stop)) throw ValidationError("scan range needs start < stop");
  if (steps < 2) throw ValidationError("scan needs at least 2 steps");
  const double h = (stop - start) / static_cast<double>(steps);
  std::vector<double> xs(steps);
  for (std::size_t i = 0; i < steps; ++i) xs[i] = start + (static_cast<double>(i) + 0.5) * h;
  return xs;
}

std::vector<double> samples_around(double x_c, double h, std::size_t count) {
  if (!(h > 0.0)) throw ValidationError("sample spacing must be positive");
  if (count < 2) throw ValidationError("need at least 2 samples");
  std::vector<double> xs(count);
  const double first = -static_cast<double>(count / 2) + 0.5;
  for (std::size_t i = 0; i < count; ++i) xs[i] = x_c + (first + static_cast<double>(i)) * h;
  return xs;
}

ParamScan central_derivative(const ParamScan& scan, int order) {
  if (order != 1 && order != 2) throw ValidationError("derivative order must be 1 or 2");
  if (scan.size() < static_cast<std::size_t>(order) + 2) {
    throw ValidationError("too few scan points for a central difference");
  }
  const auto& x = scan.x();
  const auto& y = scan.y();
  const double h = scan.step();
  std::vector<double> xs;
  std::vector<double> ds;
  xs.reserve(scan.size() - 2);
  ds.reserve(scan.size() - 2);
  for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
    xs.push_back(x[i]);
    if (order == 1) {
      ds.push_back((y[i + 1] - y[i - 1]) / (2.0 * h));
    } else {
      ds.push_back((y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h));
    }
  }
  const std::string name =
      order == 1 ? "d(" + scan.parameter() + ")" : "d2(" + scan.parameter() + ")";
  return ParamScan(name, std::move(xs), std::move(ds));
}

}  // namespace qbattery
