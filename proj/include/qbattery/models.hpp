#ifndef QBATTERY_MODELS_HPP
#define QBATTERY_MODELS_HPP

#include <qbattery/execution.hpp>
#include <qbattery/kernel.hpp>
#include <qbattery/quadrature.hpp>
#include <qbattery/types.hpp>

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qbattery {

// ---------------------------------------------------------------------------
// Dirac cone, d = 1 or 2
// ---------------------------------------------------------------------------

struct DiracParams {
  int dim = 1;
  double mass = 0.0;
};

/// d(k) = (kx, 0, m) in 1D, (kx, ky, m) in 2D. `k` must have `dim` components.
DVector dirac_d(std::span<const double> k, const DiracParams& p);

/// Band map of the Dirac model (1D ignores ky).
BandMap dirac_band(const DiracParams& p);

// ---------------------------------------------------------------------------
// Transverse-field Ising chain
// ---------------------------------------------------------------------------

struct IsingParams {
  double h = 0.0;
};

/// Quasiparticle dispersion sqrt((h - cos k)^2 + sin^2 k).
double ising_dispersion(double h, double k);

/// Two-band vector (0, sin k, h - cos k) whose norm is ising_dispersion.
DVector ising_d(double k, const IsingParams& p);

/// Momenta k_j = -pi + (j + 1/2) 2 pi / n_k used by ising_energy.
BZGrid ising_grid(std::size_t n_k);

/// Long-time stored energy of the chain quenched h0 -> h0 + h1 -> h0:
///   h1^2 sum_k sin^2 k / (2 eps(k) omega(k)^2)
/// over ising_grid(n_k). Modes within 1e-12 of a gap closing are dropped
/// and counted.
EnergyTotal ising_energy(double h0, double h1, std::size_t n_k,
                         EnergyConvention conv = EnergyConvention::per_mode,
                         const Execution& exec = {});

// ---------------------------------------------------------------------------
// Haldane model at flux phase pi/2
// ---------------------------------------------------------------------------

struct HaldaneParams {
  double t1 = 1.0;  ///< nearest-neighbour hopping
  double t2 = 0.0;  ///< next-nearest-neighbour amplitude
  double m = 1.0;   ///< staggered sublattice potential
  double a = 1.0;   ///< Bravais lattice constant
};

using Vec2 = std::array<double, 2>;

struct HaldaneLattice {
  Vec2 a1;
  Vec2 a2;
  Vec2 delta_b;  ///< position of the B site in the unit cell
  Vec2 b1;
  Vec2 b2;
};

HaldaneLattice haldane_lattice(double a);

/// Bloch vector of the Haldane model (identity shift omitted).
DVector haldane_d(const Momentum& k, const HaldaneParams& p);

BandMap haldane_band(const HaldaneParams& p);

/// Dirac points K = (b2 - b1) / 3 = (2 pi / 3a)(-1, sqrt 3) and K' = -K.
std::pair<Momentum, Momentum> haldane_dirac_points(const HaldaneParams& p);

/// Dirac masses (m_K, m_K') = (m - 3 sqrt3 t2, m + 3 sqrt3 t2).
std::pair<double, double> haldane_masses(const HaldaneParams& p);

/// Positive branch m / (3 sqrt 3) of the critical next-nearest-neighbour hopping.
double critical_t2(double m);

/// Chern number (sgn m_K' - sgn m_K) / 2. Throws CriticalityError when a
/// Dirac mass vanishes.
int chern_sign(const HaldaneParams& p);

/// Lattice Chern number (upper band flux, same sign convention as
/// chern_sign) from plaquette Berry fluxes on an
/// n x n discretization of the reciprocal cell. Throws CriticalityError when
/// the gap on the grid drops below 1e-6 t1.
int chern_numeric(const HaldaneParams& p, std::size_t n);

/// Half-step-offset n x n sampling of the Haldane reciprocal cell.
BZGrid haldane_grid(double a, std::size_t n);

/// Haldane d-vectors with the t2-independent parts tabulated once, so that
/// stored-energy scans over t2 only redo arithmetic.
class HaldaneTable {
 public:
  HaldaneTable(double t1, double m, double a, std::size_t n, const Execution& exec = {});

  std::size_t size() const { return d1_.size(); }
  std::size_t grid_count() const { return n_; }

  /// d-vectors for next-nearest-neighbour amplitude t2, in grid order.
  void fill(double t2, std::vector<DVector>& out) const;

  /// Stored energy of the quench t2 -> t2 + delta -> t2.
  EnergyTotal stored_energy(double t2, double delta, std::optional<double> tau = std::nullopt,
                            EnergyConvention conv = EnergyConvention::per_mode,
                            const Execution& exec = {}) const;

 private:
  double m_;
  std::size_t n_;
  std::vector<double> d1_;
  std::vector<double> d2_;
  std::vector<double> s3_;  // sin(k.a1) - sin(k.(a1 - a2)) - sin(k.a2)
};

// ---------------------------------------------------------------------------
// Quench protocol
// ---------------------------------------------------------------------------

enum class ModelFamily { dirac1d, dirac2d, ising, haldane };

std::string_view to_string(ModelFamily f);
ModelFamily model_family_from_string(std::string_view name);

using ModelParams = std::variant<DiracParams, IsingParams, HaldaneParams>;

/// Double sudden quench: ground state of `pre`, evolve with `during` for tau
/// (long-time average when tau is absent), switch back.
struct QuenchSpec {
  ModelFamily family = ModelFamily::dirac1d;
  ModelParams pre;
  ModelParams during;
  std::optional<double> tau;

  /// Dirac mass quench mA -> mA + delta.
  static QuenchSpec dirac(int dim, double mA, double delta);
  /// Ising field quench h0 -> h0 + h1.
  static QuenchSpec ising(double h0, double h1);
  /// Haldane quench t2 -> t2 + delta at fixed t1, m, a.
  static QuenchSpec haldane(const HaldaneParams& base, double t2, double delta);

  /// Throws ValidationError unless pre/during share the family and differ
  /// only in the quenched coupling.
  void validate() const;
};

/// Numerical settings for evaluating a QuenchSpec.
struct EnergySettings {
  RadialShell shell{};  ///< Dirac: cutoff and panel count (dim is taken from the family)
  RadialIntegrand integrand = RadialIntegrand::full;
  std::size_t ising_points = 8192;
  std::size_t haldane_points = 512;  ///< per reciprocal direction
  EnergyConvention convention = EnergyConvention::per_mode;
  Execution exec{};
};

/// Stored energy for any supported family. Dirac models use the radial shell
/// integral; lattice models sum the kernel over their Brillouin zone.
EnergyTotal stored_energy(const QuenchSpec& q, const EnergySettings& s);

}  // namespace qbattery

#endif  // QBATTERY_MODELS_HPP
