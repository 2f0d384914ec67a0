#include <qbattery/errors.hpp>
#include <qbattery/models.hpp>

#include <cmath>

#include <fmt/format.h>

namespace qbattery {

std::string_view to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::dirac1d:
      return "dirac1d";
    case ModelFamily::dirac2d:
      return "dirac2d";
    case ModelFamily::ising:
      return "ising";
    case ModelFamily::haldane:
      return "haldane";
  }
  return "?";
}

ModelFamily model_family_from_string(std::string_view name) {
  if (name == "dirac1d") return ModelFamily::dirac1d;
  if (name == "dirac2d") return ModelFamily::dirac2d;
  if (name == "ising") return ModelFamily::ising;
  if (name == "haldane") return ModelFamily::haldane;
  throw ValidationError(fmt::format("unknown model '{}'", name));
}

QuenchSpec QuenchSpec::dirac(int dim, double mA, double delta) {
  QuenchSpec q;
  q.family = dim == 1 ? ModelFamily::dirac1d : ModelFamily::dirac2d;
  q.pre = DiracParams{dim, mA};
  q.during = DiracParams{dim, mA + delta};
  q.validate();
  return q;
}

QuenchSpec QuenchSpec::ising(double h0, double h1) {
  QuenchSpec q;
  q.family = ModelFamily::ising;
  q.pre = IsingParams{h0};
  q.during = IsingParams{h0 + h1};
  q.validate();
  return q;
}

QuenchSpec QuenchSpec::haldane(const HaldaneParams& base, double t2, double delta) {
  QuenchSpec q;
  q.family = ModelFamily::haldane;
  HaldaneParams pre = base;
  pre.t2 = t2;
  HaldaneParams during = base;
  during.t2 = t2 + delta;
  q.pre = pre;
  q.during = during;
  q.validate();
  return q;
}

void QuenchSpec::validate() const {
  if (tau && !std::isfinite(*tau)) throw ValidationError("charging time must be finite");
  switch (family) {
    case ModelFamily::dirac1d:
    case ModelFamily::dirac2d: {
      const auto* a = std::get_if<DiracParams>(&pre);
      const auto* b = std::get_if<DiracParams>(&during);
      if (a == nullptr || b == nullptr) throw ValidationError("Dirac quench needs Dirac params");
      const int dim = family == ModelFamily::dirac1d ? 1 : 2;
      if (a->dim != dim || b->dim != dim) throw ValidationError("Dirac dimension mismatch");
      if (!std::isfinite(a->mass) || !std::isfinite(b->mass)) {
        throw ValidationError("Dirac masses must be finite");
      }
      return;
    }
    case ModelFamily::ising: {
      const auto* a = std::get_if<IsingParams>(&pre);
      const auto* b = std::get_if<IsingParams>(&during);
      if (a == nullptr || b == nullptr) throw ValidationError("Ising quench needs Ising params");
      if (!std::isfinite(a->h) || !std::isfinite(b->h)) {
        throw ValidationError("Ising fields must be finite");
      }
      return;
    }
    case ModelFamily::haldane: {
      const auto* a = std::get_if<HaldaneParams>(&pre);
      const auto* b = std::get_if<HaldaneParams>(&during);
      if (a == nullptr || b == nullptr) {
        throw ValidationError("Haldane quench needs Haldane params");
      }
      if (a->t1 != b->t1 || a->m != b->m || a->a != b->a) {
        throw ValidationError("Haldane quench may only change t2");
      }
      if (!(a->a > 0.0)) throw ValidationError("Haldane lattice constant must be positive");
      return;
    }
  }
}

EnergyTotal stored_energy(const QuenchSpec& q, const EnergySettings& s) {
  q.validate();
  switch (q.family) {
    case ModelFamily::dirac1d:
    case ModelFamily::dirac2d: {
      if (q.tau) throw ValidationError("Dirac shell integral is long-time only");
      const auto& a = std::get<DiracParams>(q.pre);
      const auto& b = std::get<DiracParams>(q.during);
      RadialShell shell = s.shell;
      shell.dim = a.dim;
      EnergyTotal out;
      out.value = dirac_energy_radial(shell, a.mass, b.mass, a.mass - b.mass, s.integrand);
      out.points = static_cast<std::size_t>(shell.panels);
      return out;
    }
    case ModelFamily::ising: {
      if (q.tau) throw ValidationError("Ising closed formula is long-time only");
      const double h0 = std::get<IsingParams>(q.pre).h;
      const double h1 = std::get<IsingParams>(q.during).h - h0;
      return ising_energy(h0, h1, s.ising_points, s.convention, s.exec);
    }
    case ModelFamily::haldane: {
      const auto& a = std::get<HaldaneParams>(q.pre);
      const auto& b = std::get<HaldaneParams>(q.during);
      const BZGrid grid = haldane_grid(a.a, s.haldane_points);
      return total_energy(haldane_band(a), haldane_band(b), grid, q.tau, s.convention, s.exec);
    }
  }
  throw ValidationError("unsupported model family");
}

}  // namespace qbattery
