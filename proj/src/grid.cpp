#include <qbattery/errors.hpp>
#include <qbattery/quadrature.hpp>

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace qbattery {

namespace {

void check_offset(double o) {
  if (!(o > 0.0 && o < 1.0)) {
    throw ValidationError(fmt::format("grid offset {} outside (0, 1)", o));
  }
}

}  // namespace

std::string_view to_string(EnergyConvention c) {
  return c == EnergyConvention::raw_sum ? "raw_sum" : "per_mode";
}

EnergyConvention energy_convention_from_string(std::string_view name) {
  if (name == "raw_sum") return EnergyConvention::raw_sum;
  if (name == "per_mode") return EnergyConvention::per_mode;
  throw ValidationError(fmt::format("unknown energy convention '{}'", name));
}

BZGrid BZGrid::line(std::size_t n, double half_width, double offset) {
  if (n < 2) throw ValidationError("1D grid needs at least 2 points");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ValidationError("1D grid half-width must be positive");
  }
  check_offset(offset);
  BZGrid g;
  g.dim_ = 1;
  g.n1_ = n;
  g.n2_ = 1;
  g.half_width_ = half_width;
  g.offset1_ = offset;
  return g;
}

BZGrid BZGrid::reciprocal_cell(const std::array<double, 2>& b1,
                               const std::array<double, 2>& b2, std::size_t n1,
                               std::size_t n2, double offset1, double offset2) {
  if (n1 < 2 || n2 < 2) throw ValidationError("2D grid needs at least 2x2 points");
  check_offset(offset1);
  check_offset(offset2);
  if (b1[0] * b2[1] - b1[1] * b2[0] == 0.0) {
    throw ValidationError("reciprocal basis vectors are collinear");
  }
  BZGrid g;
  g.dim_ = 2;
  g.n1_ = n1;
  g.n2_ = n2;
  g.offset1_ = offset1;
  g.offset2_ = offset2;
  g.b1_ = b1;
  g.b2_ = b2;
  return g;
}

Momentum BZGrid::point(std::size_t i) const {
  if (dim_ == 1) {
    const double step = 2.0 * half_width_ / static_cast<double>(n1_);
    return {-half_width_ + (static_cast<double>(i) + offset1_) * step, 0.0};
  }
  const std::size_t i1 = i / n2_;
  const std::size_t i2 = i % n2_;
  const double f1 = (static_cast<double>(i1) + offset1_) / static_cast<double>(n1_);
  const double f2 = (static_cast<double>(i2) + offset2_) / static_cast<double>(n2_);
  return {f1 * b1_[0] + f2 * b2_[0], f1 * b1_[1] + f2 * b2_[1]};
}

double BZGrid::measure() const {
  if (dim_ == 1) return 2.0 * half_width_;
  return std::fabs(b1_[0] * b2_[1] - b1_[1] * b2_[0]);
}

double bz_sum(const std::function<double(const Momentum&)>& f, const BZGrid& grid,
              EnergyConvention conv, const Execution& exec) {
  const BlockSum total = reduce_blocks(
      grid.size(),
      [&](std::size_t begin, std::size_t end) {
        BlockSum s;
        for (std::size_t i = begin; i < end; ++i) {
          const Momentum k = grid.point(i);
          double v = 0.0;
          try {
            v = f(k);
          } catch (const std::exception& e) {
            throw ValidationError(
                fmt::format("at k = ({:.17g}, {:.17g}): {}", k.kx, k.ky, e.what()));
          }
          s.sum.add(v);
        }
        return s;
      },
      exec);
  const double raw = total.sum.value();
  return conv == EnergyConvention::per_mode ? raw / static_cast<double>(grid.size())
                                            : raw;
}

}  // namespace qbattery
