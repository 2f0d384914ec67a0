#ifndef QBATTERY_TYPES_HPP
#define QBATTERY_TYPES_HPP

#include <cmath>
#include <functional>
#include <string_view>

namespace qbattery {

/// Coefficients of a two-band Bloch Hamiltonian d(k)·σ at one momentum.
struct DVector {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  bool finite() const {
    return std::isfinite(d1) && std::isfinite(d2) && std::isfinite(d3);
  }

  friend bool operator==(const DVector&, const DVector&) = default;
};

/// Crystal momentum; 1D models only use kx.
struct Momentum {
  double kx = 0.0;
  double ky = 0.0;

  friend bool operator==(const Momentum&, const Momentum&) = default;
};

/// Maps a momentum to the d-vector of one Hamiltonian.
using BandMap = std::function<DVector(const Momentum&)>;

/// How a momentum sum is normalized.
enum class EnergyConvention {
  raw_sum,   ///< plain sum over grid points (extensive)
  per_mode,  ///< sum divided by the number of grid points
};

std::string_view to_string(EnergyConvention c);
EnergyConvention energy_convention_from_string(std::string_view name);

}  // namespace qbattery

#endif  // QBATTERY_TYPES_HPP
