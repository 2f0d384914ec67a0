#include <qbattery/errors.hpp>
#include <qbattery/models.hpp>

#include <fmt/format.h>

namespace qbattery {

namespace {

void check_params(const DiracParams& p) {
  if (p.dim != 1 && p.dim != 2) {
    throw ValidationError(fmt::format("Dirac model dimension must be 1 or 2, got {}", p.dim));
  }
  if (!std::isfinite(p.mass)) throw ValidationError("Dirac mass must be finite");
}

}  // namespace

DVector dirac_d(std::span<const double> k, const DiracParams& p) {
  check_params(p);
  if (k.size() != static_cast<std::size_t>(p.dim)) {
    throw ValidationError(
        fmt::format("momentum has {} components, Dirac model is {}D", k.size(), p.dim));
  }
  if (p.dim == 1) return {k[0], 0.0, p.mass};
  return {k[0], k[1], p.mass};
}

BandMap dirac_band(const DiracParams& p) {
  check_params(p);
  if (p.dim == 1) {
    return [m = p.mass](const Momentum& k) { return DVector{k.kx, 0.0, m}; };
  }
  return [m = p.mass](const Momentum& k) { return DVector{k.kx, k.ky, m}; };
}

}  // namespace qbattery
