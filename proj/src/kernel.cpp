#include <qbattery/errors.hpp>
#include <qbattery/kernel.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace qbattery {

namespace {

void require_finite(const DVector& d, const char* which) {
  if (!d.finite()) {
    throw ValidationError(fmt::format("non-finite {} d-vector ({}, {}, {})", which, d.d1,
                                      d.d2, d.d3));
  }
}

// Unchecked kernel body shared by mode_energy and the grid sums; eps, omega > 0.
double mode_value(const DVector& a, const DVector& b, double eps, double omega,
                  std::optional<double> tau) {
  const double weight = tau ? 1.0 - std::cos(2.0 * omega * *tau) : 1.0;
  if (weight == 0.0) return 0.0;
  return weight * f0(a, b) / (omega * omega * eps);
}

}  // namespace

double dispersion(const DVector& d) { return std::hypot(d.d1, d.d2, d.d3); }

double f0(const DVector& a, const DVector& b) {
  require_finite(a, "pre-quench");
  require_finite(b, "evolution");
  const double omega2 = b.d1 * b.d1 + b.d2 * b.d2 + b.d3 * b.d3;
  if (omega2 == 0.0) {
    throw DegenerateModeError("evolution Hamiltonian vanishes at this momentum");
  }
  // rho^2 = omega^2 - dB3^2, formed directly to avoid cancellation.
  const double rho2 = b.d1 * b.d1 + b.d2 * b.d2;
  if (rho2 < kDegenerateDirectionRatio * omega2) {
    return b.d3 * b.d3 * (a.d1 * a.d1 + a.d2 * a.d2);
  }
  const double cross = a.d1 * b.d2 - a.d2 * b.d1;
  const double dot = a.d1 * b.d1 + a.d2 * b.d2;
  // omega^2/rho^2 cross^2 + (dA3 rho - dB3 dot / rho)^2, over a common rho^2.
  const double second = a.d3 * rho2 - b.d3 * dot;
  return (omega2 * cross * cross + second * second) / rho2;
}

ModeEnergy mode_energy(const DVector& dA, const DVector& dB, std::optional<double> tau) {
  require_finite(dA, "pre-quench");
  require_finite(dB, "evolution");
  if (tau && !std::isfinite(*tau)) throw ValidationError("charging time must be finite");
  const double eps = dispersion(dA);
  const double omega = dispersion(dB);
  if (eps == 0.0) throw DegenerateModeError("pre-quench gap closes at this momentum");
  if (omega == 0.0) throw DegenerateModeError("evolution gap closes at this momentum");
  return {mode_value(dA, dB, eps, omega, tau)};
}

EnergyTotal total_energy(std::span<const DVector> dA, std::span<const DVector> dB,
                         std::optional<double> tau, EnergyConvention conv,
                         const Execution& exec) {
  if (dA.size() != dB.size()) {
    throw ValidationError("pre-quench and evolution samples differ in length");
  }
  if (dA.empty()) throw ValidationError("empty momentum set");
  if (tau && !std::isfinite(*tau)) throw ValidationError("charging time must be finite");

  const BlockSum total = reduce_blocks(
      dA.size(),
      [&](std::size_t begin, std::size_t end) {
        BlockSum s;
        for (std::size_t i = begin; i < end; ++i) {
          const DVector& a = dA[i];
          const DVector& b = dB[i];
          if (!a.finite() || !b.finite()) {
            throw ValidationError(fmt::format("non-finite band-map output at grid index {}", i));
          }
          const double eps = dispersion(a);
          const double omega = dispersion(b);
          if (eps == 0.0 || omega == 0.0) {
            ++s.dropped;
            continue;
          }
          s.sum.add(mode_value(a, b, eps, omega, tau));
        }
        return s;
      },
      exec);

  EnergyTotal out;
  out.points = dA.size();
  out.dropped_modes = total.dropped;
  out.value = total.sum.value();
  if (conv == EnergyConvention::per_mode) out.value /= static_cast<double>(out.points);
  return out;
}

EnergyTotal total_energy(const BandMap& bandA, const BandMap& bandB, const BZGrid& grid,
                         std::optional<double> tau, EnergyConvention conv,
                         const Execution& exec) {
  const std::size_t n = grid.size();
  std::vector<DVector> a(n);
  std::vector<DVector> b(n);
  parallel_for(
      (n + kReductionBlock - 1) / kReductionBlock,
      [&](std::size_t blk) {
        const std::size_t begin = blk * kReductionBlock;
        const std::size_t end = std::min(n, begin + kReductionBlock);
        for (std::size_t i = begin; i < end; ++i) {
          const Momentum k = grid.point(i);
          a[i] = bandA(k);
          b[i] = bandB(k);
          if (!a[i].finite() || !b[i].finite()) {
            throw ValidationError(fmt::format(
                "non-finite band-map output at k = ({:.17g}, {:.17g})", k.kx, k.ky));
          }
        }
      },
      exec);
  return total_energy(std::span<const DVector>(a), std::span<const DVector>(b), tau, conv,
                      exec);
}

}  // namespace qbattery
