#include <qbattery/errors.hpp>
#include <qbattery/models.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <fmt/format.h>

namespace qbattery {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

double dot(const Momentum& k, const Vec2& v) { return k.kx * v[0] + k.ky * v[1]; }

void check_lattice_constant(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw ValidationError("Haldane lattice constant must be positive");
  }
}

// Sum of the three t2 sines entering d3. The sign convention puts the mass
// m - 3 sqrt3 t2 at K = (2 pi / 3a)(-1, sqrt3).
double nnn_sines(const Momentum& k, const HaldaneLattice& lat) {
  const Vec2 a12{lat.a1[0] - lat.a2[0], lat.a1[1] - lat.a2[1]};
  return std::sin(dot(k, lat.a1)) - std::sin(dot(k, a12)) - std::sin(dot(k, lat.a2));
}

void nn_terms(const Momentum& k, const HaldaneLattice& lat, double& c, double& s) {
  const Vec2& db = lat.delta_b;
  const double p1 = dot(k, db);
  const double p2 = p1 - dot(k, lat.a1);
  const double p3 = p1 - dot(k, lat.a2);
  c = std::cos(p1) + std::cos(p2) + std::cos(p3);
  s = std::sin(p1) + std::sin(p2) + std::sin(p3);
}

}  // namespace

HaldaneLattice haldane_lattice(double a) {
  check_lattice_constant(a);
  const double g = 2.0 * std::numbers::pi / a;
  return {
      {a, 0.0},
      {0.5 * a, 0.5 * kSqrt3 * a},
      {0.5 * a, a / (2.0 * kSqrt3)},
      {g, -g / kSqrt3},
      {0.0, 2.0 * g / kSqrt3},
  };
}

DVector haldane_d(const Momentum& k, const HaldaneParams& p) {
  const HaldaneLattice lat = haldane_lattice(p.a);
  double c = 0.0;
  double s = 0.0;
  nn_terms(k, lat, c, s);
  return {p.t1 * c, -p.t1 * s, p.m + 2.0 * p.t2 * nnn_sines(k, lat)};
}

BandMap haldane_band(const HaldaneParams& p) {
  check_lattice_constant(p.a);
  return [p](const Momentum& k) { return haldane_d(k, p); };
}

std::pair<Momentum, Momentum> haldane_dirac_points(const HaldaneParams& p) {
  check_lattice_constant(p.a);
  const double g = 2.0 * std::numbers::pi / (3.0 * p.a);
  const Momentum K{-g, g * kSqrt3};
  return {K, Momentum{-K.kx, -K.ky}};
}

std::pair<double, double> haldane_masses(const HaldaneParams& p) {
  const double shift = 3.0 * kSqrt3 * p.t2;
  return {p.m - shift, p.m + shift};
}

double critical_t2(double m) { return m / (3.0 * kSqrt3); }

int chern_sign(const HaldaneParams& p) {
  const auto [mK, mKp] = haldane_masses(p);
  if (mK == 0.0 || mKp == 0.0) {
    throw CriticalityError(
        fmt::format("Dirac mass vanishes (m_K = {}, m_K' = {}); Chern number undefined", mK, mKp));
  }
  const int sK = mK > 0.0 ? 1 : -1;
  const int sKp = mKp > 0.0 ? 1 : -1;
  return (sKp - sK) / 2;
}

int chern_numeric(const HaldaneParams& p, std::size_t n) {
  if (n < 12) throw ValidationError("lattice Chern number needs n >= 12");
  const HaldaneLattice lat = haldane_lattice(p.a);
  const BZGrid grid = BZGrid::reciprocal_cell(lat.b1, lat.b2, n, n);
  using cplx = std::complex<double>;

  // Upper-band eigenvector of d.sigma in whichever gauge is regular at this d.
  // Its flux carries the sign convention of chern_sign.
  std::vector<std::array<cplx, 2>> u(grid.size());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const DVector d = haldane_d(grid.point(i), p);
    const double e = dispersion(d);
    min_gap = std::min(min_gap, e);
    std::array<cplx, 2> v;
    if (d.d3 >= 0.0) {
      v = {cplx(d.d3 + e, 0.0), cplx(d.d1, d.d2)};
    } else {
      v = {cplx(d.d1, -d.d2), cplx(e - d.d3, 0.0)};
    }
    const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    u[i] = {v[0] / norm, v[1] / norm};
  }
  if (min_gap <= 1e-6 * std::fabs(p.t1)) {
    throw CriticalityError(fmt::format("gap {} too small for a lattice Chern number", min_gap));
  }

  auto at = [&](std::size_t i1, std::size_t i2) -> const std::array<cplx, 2>& {
    return u[(i1 % n) * n + (i2 % n)];
  };
  auto link = [](const std::array<cplx, 2>& a, const std::array<cplx, 2>& b) {
    const cplx ov = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
    return ov / std::abs(ov);
  };

  double flux = 0.0;
  for (std::size_t i1 = 0; i1 < n; ++i1) {
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const auto& u00 = at(i1, i2);
      const auto& u10 = at(i1 + 1, i2);
      const auto& u11 = at(i1 + 1, i2 + 1);
      const auto& u01 = at(i1, i2 + 1);
      const cplx loop = link(u00, u10) * link(u10, u11) * link(u11, u01) * link(u01, u00);
      flux += std::arg(loop);
    }
  }
  return static_cast<int>(std::lround(flux / (2.0 * std::numbers::pi)));
}

BZGrid haldane_grid(double a, std::size_t n) {
  const HaldaneLattice lat = haldane_lattice(a);
  return BZGrid::reciprocal_cell(lat.b1, lat.b2, n, n);
}

HaldaneTable::HaldaneTable(double t1, double m, double a, std::size_t n,
                           const Execution& exec)
    : m_(m), n_(n) {
  const HaldaneLattice lat = haldane_lattice(a);
  const BZGrid grid = BZGrid::reciprocal_cell(lat.b1, lat.b2, n, n);
  d1_.resize(grid.size());
  d2_.resize(grid.size());
  s3_.resize(grid.size());
  parallel_for(
      n,
      [&](std::size_t row) {
        for (std::size_t i = row * n; i < (row + 1) * n; ++i) {
          const Momentum k = grid.point(i);
          double c = 0.0;
          double s = 0.0;
          nn_terms(k, lat, c, s);
          d1_[i] = t1 * c;
          d2_[i] = -t1 * s;
          s3_[i] = nnn_sines(k, lat);
        }
      },
      exec);
}

void HaldaneTable::fill(double t2, std::vector<DVector>& out) const {
  out.resize(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out[i] = {d1_[i], d2_[i], m_ + 2.0 * t2 * s3_[i]};
  }
}

EnergyTotal HaldaneTable::stored_energy(double t2, double delta, std::optional<double> tau,
                                        EnergyConvention conv, const Execution& exec) const {
  std::vector<DVector> a;
  std::vector<DVector> b;
  fill(t2, a);
  fill(t2 + delta, b);
  return total_energy(std::span<const DVector>(a), std::span<const DVector>(b), tau, conv,
                      exec);
}

}  // namespace qbattery
