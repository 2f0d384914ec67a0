#ifndef QBATTERY_KERNEL_HPP
#define QBATTERY_KERNEL_HPP

#include <qbattery/execution.hpp>
#include <qbattery/quadrature.hpp>
#include <qbattery/types.hpp>

#include <cstddef>
#include <optional>
#include <span>

namespace qbattery {

/// Energy stored in a single momentum mode. Always >= 0.
struct ModeEnergy {
  double value = 0.0;
};

/// Result of a momentum sum of mode energies.
struct EnergyTotal {
  double value = 0.0;
  /// Modes skipped because the pre-quench or evolution gap vanished there.
  std::size_t dropped_modes = 0;
  std::size_t points = 0;
};

/// Band energy |d|.
double dispersion(const DVector& d);

/// Below this ratio (d1^2 + d2^2) / |d|^2 of the evolution vector the
/// closed-form limit replaces the general F0 expression.
inline constexpr double kDegenerateDirectionRatio = 1e-12;

/// Quench overlap factor F0 of the pre-quench vector dA against the
/// evolution vector dB. When dB is (numerically) along the 3-axis the
/// expression is 0/0 and its limit dB3^2 (dA1^2 + dA2^2) is returned.
/// Throws DegenerateModeError when |dB| = 0, ValidationError on non-finite input.
double f0(const DVector& dA, const DVector& dB);

/// Energy stored in one mode after the double quench. With `tau` the
/// oscillating factor 1 - cos(2 omega tau) is kept; without it the long-time
/// average (factor 1) is used. Throws DegenerateModeError when |dA| or |dB|
/// vanishes.
ModeEnergy mode_energy(const DVector& dA, const DVector& dB,
                       std::optional<double> tau = std::nullopt);

/// Stored energy summed over `grid` in fixed index order with compensated,
/// thread-count-independent reduction. Critical modes contribute 0 and are
/// counted in `dropped_modes`. Non-finite band-map output is a ValidationError.
EnergyTotal total_energy(const BandMap& bandA, const BandMap& bandB, const BZGrid& grid,
                         std::optional<double> tau = std::nullopt,
                         EnergyConvention conv = EnergyConvention::per_mode,
                         const Execution& exec = {});

/// Same aggregation over pre-sampled d-vectors (dA[i], dB[i] at grid point i).
EnergyTotal total_energy(std::span<const DVector> dA, std::span<const DVector> dB,
                         std::optional<double> tau = std::nullopt,
                         EnergyConvention conv = EnergyConvention::per_mode,
                         const Execution& exec = {});

}  // namespace qbattery

#endif  // QBATTERY_KERNEL_HPP
