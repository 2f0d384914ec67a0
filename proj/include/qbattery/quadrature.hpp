#ifndef QBATTERY_QUADRATURE_HPP
#define QBATTERY_QUADRATURE_HPP

#include <qbattery/execution.hpp>
#include <qbattery/types.hpp>

#include <array>
#include <cstddef>
#include <functional>
#include <numbers>

namespace qbattery {

/// Uniform momentum grid over a Brillouin zone (or a 1D window of it).
///
/// 1D: k_j = -L + (j + o) * 2L / N on (-L, L), L = pi by default.
/// 2D: k = ((n1 + o1) / N1) b1 + ((n2 + o2) / N2) b2 over the reciprocal cell.
/// Offsets o lie in (0, 1); the default half-step offset keeps the grid off
/// k = 0 and off the Dirac points of the honeycomb lattice.
class BZGrid {
 public:
  static BZGrid line(std::size_t n, double half_width = std::numbers::pi, double offset = 0.5);
  static BZGrid reciprocal_cell(const std::array<double, 2>& b1,
                                const std::array<double, 2>& b2, std::size_t n1,
                                std::size_t n2, double offset1 = 0.5,
                                double offset2 = 0.5);

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 1 ? n1_ : n1_ * n2_; }
  std::size_t count1() const { return n1_; }
  std::size_t count2() const { return dim_ == 1 ? 1 : n2_; }

  /// Momentum of flat index i (row-major over (n1, n2) in 2D).
  Momentum point(std::size_t i) const;

  /// Length (1D) or area (2D) of the sampled momentum region.
  double measure() const;

 private:
  BZGrid() = default;

  int dim_ = 1;
  std::size_t n1_ = 0;
  std::size_t n2_ = 1;
  double offset1_ = 0.5;
  double offset2_ = 0.5;
  double half_width_ = std::numbers::pi;
  std::array<double, 2> b1_{};
  std::array<double, 2> b2_{};
};

/// Deterministic compensated sum of f over the grid. Errors thrown by f are
/// rethrown as ValidationError naming the offending momentum.
double bz_sum(const std::function<double(const Momentum&)>& f, const BZGrid& grid,
              EnergyConvention conv, const Execution& exec = {});

/// Surface area S_{d-1} = 2 pi^{d/2} / Gamma(d/2) of the unit sphere in R^d,
/// computed through the integer/half-integer Gamma recurrence.
double sphere_surface(int d);

/// Integrand used by the Dirac radial shell integral.
enum class RadialIntegrand {
  full,        ///< k^{d+1} / ((k^2 + mB^2) sqrt(k^2 + mA^2))
  simplified,  ///< k^{d+1} / ((k^2 + mB^2) |mA|), valid for k << |mA|
};

struct RadialShell {
  int dim = 1;
  double cutoff = 10.0;
  int panels = 512;
};

struct QuadratureResult {
  double value = 0.0;
  /// |I(2N) - I(N)| / |I(2N)| from panel doubling (0 when I(2N) = 0).
  double relative_change = 0.0;
};

/// Stored energy of the d-dimensional Dirac model quenched from mass mA to
/// mB, integrated over the momentum shell |k| <= cutoff:
///
///   S_{d-1} / (2 pi)^d * dM^2 * int_0^cutoff integrand(k) dk
///
/// Composite 20-point Gauss-Legendre on `panels` uniform panels, with the
/// panel touching k = 0 split geometrically so that scales |mA|, |mB| far
/// below the panel width stay resolved. Throws ValidationError for mA = 0.
double dirac_energy_radial(const RadialShell& shell, double mA, double mB, double dM,
                           RadialIntegrand integrand = RadialIntegrand::full);

/// Same integral evaluated with N and 2N panels; `value` is the 2N result.
QuadratureResult dirac_energy_radial_checked(const RadialShell& shell, double mA,
                                             double mB, double dM,
                                             RadialIntegrand integrand = RadialIntegrand::full);

std::string_view to_string(RadialIntegrand r);
RadialIntegrand radial_integrand_from_string(std::string_view name);

}  // namespace qbattery

#endif  // QBATTERY_QUADRATURE_HPP
