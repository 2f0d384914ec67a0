#include <qbattery/errors.hpp>
#include <qbattery/models.hpp>

#include <cmath>
#include <numbers>

namespace qbattery {

namespace {

// Modes whose gap is below this are treated as sitting on the gap closing.
constexpr double kGapFloor = 1e-12;

}  // namespace

double ising_dispersion(double h, double k) {
  const double c = h - std::cos(k);
  const double s = std::sin(k);
  return std::sqrt(c * c + s * s);
}

DVector ising_d(double k, const IsingParams& p) { return {0.0, std::sin(k), p.h - std::cos(k)}; }

BZGrid ising_grid(std::size_t n_k) { return BZGrid::line(n_k, std::numbers::pi, 0.5); }

EnergyTotal ising_energy(double h0, double h1, std::size_t n_k, EnergyConvention conv,
                         const Execution& exec) {
  if (n_k < 2) throw ValidationError("Ising energy needs at least 2 momenta");
  if (!std::isfinite(h0) || !std::isfinite(h1)) {
    throw ValidationError("Ising fields must be finite");
  }
  const BZGrid grid = ising_grid(n_k);
  EnergyTotal out;
  out.points = n_k;
  if (h1 == 0.0) return out;

  const double h = h0 + h1;
  const BlockSum total = reduce_blocks(
      n_k,
      [&](std::size_t begin, std::size_t end) {
        BlockSum s;
        for (std::size_t j = begin; j < end; ++j) {
          const double k = grid.point(j).kx;
          const double eps = ising_dispersion(h0, k);
          const double omega = ising_dispersion(h, k);
          if (eps < kGapFloor || omega < kGapFloor) {
            ++s.dropped;
            continue;
          }
          const double sk = std::sin(k);
          s.sum.add(sk * sk / (2.0 * eps * omega * omega));
        }
        return s;
      },
      exec);

  out.dropped_modes = total.dropped;
  out.value = h1 * h1 * total.sum.value();
  if (conv == EnergyConvention::per_mode) out.value /= static_cast<double>(n_k);
  return out;
}

}  // namespace qbattery
