#include <qbattery/errors.hpp>
#include <qbattery/quadrature.hpp>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

namespace qbattery {

namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

// Levels of geometric refinement of the panel that touches k = 0. The
// smallest resolved scale is (cutoff / panels) * 2^-kGradedLevels.
constexpr int kGradedLevels = 64;

void validate(const RadialShell& shell, double mA, double mB, double dM) {
  if (shell.dim < 1) throw ValidationError("radial integral needs dimension >= 1");
  if (!(shell.cutoff > 0.0) || !std::isfinite(shell.cutoff)) {
    throw ValidationError("radial cutoff must be positive and finite");
  }
  if (shell.panels < 16) throw ValidationError("radial integral needs >= 16 panels");
  if (!std::isfinite(mA) || !std::isfinite(mB) || !std::isfinite(dM)) {
    throw ValidationError("radial integral parameters must be finite");
  }
  if (mA == 0.0) {
    throw ValidationError("pre-quench mass mA = 0 is critical; stored energy undefined");
  }
}

double integrate(const RadialShell& shell, int panels, double mA, double mB,
                 RadialIntegrand integrand) {
  const int d = shell.dim;
  const double mA2 = mA * mA;
  const double mB2 = mB * mB;
  const double abs_mA = std::fabs(mA);

  auto f = [&](double k) {
    const double k2 = k * k;
    const double num = std::pow(k, d + 1);
    const double gap = integrand == RadialIntegrand::full ? std::sqrt(k2 + mA2) : abs_mA;
    return num / ((k2 + mB2) * gap);
  };

  const double width = shell.cutoff / panels;
  CompensatedSum total;

  // Geometric panels [w 2^-(j+1), w 2^-j] plus the innermost remainder,
  // accumulated smallest first.
  double lo = std::ldexp(width, -kGradedLevels);
  total.add(Rule::integrate(f, 0.0, lo));
  for (int j = kGradedLevels; j > 0; --j) {
    const double hi = std::ldexp(width, -(j - 1));
    total.add(Rule::integrate(f, lo, hi));
    lo = hi;
  }
  for (int p = 1; p < panels; ++p) {
    const double a = p * width;
    const double b = (p + 1 == panels) ? shell.cutoff : (p + 1) * width;
    total.add(Rule::integrate(f, a, b));
  }
  return total.value();
}

double prefactor(int d) { return sphere_surface(d) / std::pow(2.0 * std::numbers::pi, d); }

}  // namespace

double sphere_surface(int d) {
  if (d < 1) throw ValidationError("sphere_surface needs d >= 1");
  const double pi = std::numbers::pi;
  if (d % 2 == 0) {
    // Gamma(d/2) = (d/2 - 1)!
    double gamma = 1.0;
    for (int j = 2; j < d / 2; ++j) gamma *= j;
    return 2.0 * std::pow(pi, d / 2) / gamma;
  }
  // Odd d: Gamma(d/2) = sqrt(pi) * prod_{j=1}^{(d-1)/2} (j - 1/2); the sqrt(pi)
  // cancels against pi^{d/2} = pi^{(d-1)/2} sqrt(pi).
  const int n = (d - 1) / 2;
  double half_product = 1.0;
  for (int j = 1; j <= n; ++j) half_product *= (j - 0.5);
  return 2.0 * std::pow(pi, n) / half_product;
}

double dirac_energy_radial(const RadialShell& shell, double mA, double mB, double dM,
                           RadialIntegrand integrand) {
  validate(shell, mA, mB, dM);
  if (dM == 0.0) return 0.0;
  return prefactor(shell.dim) * dM * dM * integrate(shell, shell.panels, mA, mB, integrand);
}

QuadratureResult dirac_energy_radial_checked(const RadialShell& shell, double mA,
                                             double mB, double dM,
                                             RadialIntegrand integrand) {
  validate(shell, mA, mB, dM);
  if (dM == 0.0) return {};
  const double scale = prefactor(shell.dim) * dM * dM;
  const double coarse = scale * integrate(shell, shell.panels, mA, mB, integrand);
  const double fine = scale * integrate(shell, 2 * shell.panels, mA, mB, integrand);
  const double rel = fine == 0.0 ? 0.0 : std::fabs(fine - coarse) / std::fabs(fine);
  return {fine, rel};
}

std::string_view to_string(RadialIntegrand r) {
  return r == RadialIntegrand::full ? "full" : "simplified";
}

RadialIntegrand radial_integrand_from_string(std::string_view name) {
  if (name == "full") return RadialIntegrand::full;
  if (name == "simplified") return RadialIntegrand::simplified;
  throw ValidationError(fmt::format("unknown radial integrand '{}'", name));
}

}  // namespace qbattery
