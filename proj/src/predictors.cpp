#include <qbattery/criticality.hpp>
#include <qbattery/errors.hpp>
#include <qbattery/quadrature.hpp>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

namespace qbattery {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

void check_closed_form(double mA, double mB, double cutoff, double dM) {
  if (!std::isfinite(mA) || !std::isfinite(mB) || !std::isfinite(dM)) {
    throw ValidationError("closed-form parameters must be finite");
  }
  if (mA == 0.0) throw ValidationError("closed form undefined at mA = 0");
  if (!(cutoff > 0.0)) throw ValidationError("cutoff must be positive");
}

}  // namespace

double predicted_jump(int d, double delta, double mA_abs) {
  if (d < 1 || d % 2 == 0) {
    throw ValidationError(fmt::format("jump predictor needs odd d, got {}", d));
  }
  if (delta == 0.0 || !std::isfinite(delta)) throw ValidationError("delta must be nonzero");
  if (!(mA_abs > 0.0)) throw ValidationError("|mA| must be positive");
  // Ordered so that d = 1 reduces to (2 pi)/(2 pi) * delta * (delta / mA_abs),
  // which is exactly delta when mA_abs == delta.
  const double two_pi = 2.0 * std::numbers::pi;
  const double shape = sphere_surface(d) * std::numbers::pi / std::pow(two_pi, d) * factorial(d);
  return std::fabs(shape * delta * (delta / mA_abs));
}

double predicted_log_coefficient(int d, double delta) {
  if (d < 2 || d % 2 != 0) {
    throw ValidationError(fmt::format("log-coefficient predictor needs even d, got {}", d));
  }
  if (delta == 0.0 || !std::isfinite(delta)) throw ValidationError("delta must be nonzero");
  const double sign = (d / 2) % 2 == 1 ? 1.0 : -1.0;  // (-1)^{d/2 + 1}
  const double two_pi = 2.0 * std::numbers::pi;
  return sign * sphere_surface(d) / std::pow(two_pi, d) * factorial(d) * std::fabs(delta);
}

double harmonic_alt(int d) {
  if (d < 1) throw ValidationError("harmonic number needs d >= 1");
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  cpp_rational sum = 0;
  cpp_int binom = 1;
  for (int k = 1; k <= d; ++k) {
    binom = binom * (d - k + 1) / k;
    const cpp_rational term(binom, cpp_int(k));
    if (k % 2 == 1) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum.convert_to<double>();
}

double closed_form_1d(double mA, double mB, double cutoff, double dM) {
  check_closed_form(mA, mB, cutoff, dM);
  const double scale = dM * dM / (std::numbers::pi * std::fabs(mA));
  if (mB == 0.0) return scale * cutoff;
  return scale * (cutoff - mB * std::atan(cutoff / mB));
}

double closed_form_2d(double mA, double mB, double cutoff, double dM) {
  check_closed_form(mA, mB, cutoff, dM);
  const double scale = dM * dM / (4.0 * std::numbers::pi * std::fabs(mA));
  const double L2 = cutoff * cutoff;
  if (mB == 0.0) return scale * L2;
  const double mB2 = mB * mB;
  return scale * (L2 - mB2 * std::log1p(L2 / mB2));
}

}  // namespace qbattery
