#include <qbattery/criticality.hpp>
#include <qbattery/errors.hpp>
#include <qbattery/models.hpp>
#include <qbattery/quadrature.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

using namespace qbattery;
using std::numbers::pi;

namespace {

ParamScan sample(const std::vector<double>& xs, auto&& f, const char* name = "x") {
  std::vector<double> ys;
  for (double x : xs) ys.push_back(f(x));
  return ParamScan(name, xs, std::move(ys));
}

ParamScan dirac_scan(int dim, double delta, double centre, double h, std::size_t count,
                     RadialIntegrand integrand) {
  const RadialShell shell{dim, 10.0, 512};
  return sample(samples_around(centre, h, count), [&](double mA) {
    return dirac_energy_radial(shell, mA, mA + delta, delta, integrand);
  }, "mA");
}

}  // namespace

TEST_CASE("ParamScan validation") {
  CHECK_NOTHROW(ParamScan("x", {0.0, 0.1, 0.2}, {1, 2, 3}));
  CHECK_THROWS_AS(ParamScan("x", {0.0, 0.1}, {1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(ParamScan("x", {0.0}, {1}), ValidationError);
  CHECK_THROWS_AS(ParamScan("x", {0.0, 0.1, 0.3}, {1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(ParamScan("x", {0.2, 0.1, 0.0}, {1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(ParamScan("x", {0.0, 0.1, 0.2}, {1, NAN, 3}), ValidationError);
  // Rounding of x0 + i h at large offsets is tolerated.
  const auto xs = midpoint_samples(1000.0, 1001.0, 1000);
  CHECK_NOTHROW(ParamScan("x", xs, std::vector<double>(xs.size(), 0.0)));
}

TEST_CASE("sampling helpers stay off the critical value") {
  const auto xs = midpoint_samples(0.5, 1.0, 500);
  CHECK(xs.size() == 500);
  CHECK(xs.front() == doctest::Approx(0.5005));
  for (double x : xs) CHECK(std::fabs(x - 0.75) >= 0.0005 * (1 - 1e-9));
  const auto ys = samples_around(-2.0, 0.01, 6);
  CHECK(ys[2] == doctest::Approx(-2.005));
  CHECK(ys[3] == doctest::Approx(-1.995));
  CHECK_THROWS_AS(midpoint_samples(1.0, 1.0, 10), ValidationError);
}

TEST_CASE("central_derivative examples") {
  const auto xs = midpoint_samples(-1.0, 1.0, 20);
  const ParamScan c = central_derivative(sample(xs, [](double) { return 3.0; }), 1);
  for (double y : c.y()) CHECK(y == 0.0);
  CHECK(c.size() == xs.size() - 2);
  CHECK(c.step() == doctest::Approx(0.1));

  const ParamScan q = central_derivative(sample(xs, [](double x) { return x * x; }), 2);
  for (double y : q.y()) CHECK(y == doctest::Approx(2.0).epsilon(1e-12));

  const ParamScan a = central_derivative(sample(xs, [](double x) { return std::fabs(x); }), 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a.x()[i]) < a.step()) continue;  // stencil straddles the kink
    CHECK(a.y()[i] == doctest::Approx(a.x()[i] < 0 ? -1.0 : 1.0));
  }
  CHECK(a.y().front() < 0.0);
  CHECK(a.y().back() > 0.0);
  CHECK_THROWS_AS(central_derivative(sample({0.0, 1.0, 2.0}, [](double) { return 1.0; }), 2),
                  ValidationError);
  CHECK_THROWS_AS(central_derivative(c, 3), ValidationError);
}

TEST_CASE("estimate_jump on |x| c") {
  const double c = 1.7;
  const auto xs = midpoint_samples(-1.0, 1.0, 200);
  const ParamScan d = central_derivative(sample(xs, [&](double x) { return c * std::fabs(x); }), 1);
  const SingularityReport r = estimate_jump(d, 0.0);
  CHECK(r.kind == SingularityKind::jump);
  CHECK(r.magnitude == doctest::Approx(2.0 * c).epsilon(1e-12));
  CHECK(r.left_limit == doctest::Approx(-c));
  CHECK(r.right_limit == doctest::Approx(c));
  CHECK_THROWS_AS(estimate_jump(d, 2.0), ValidationError);
  CHECK_THROWS_AS(estimate_jump(d, 0.985), ValidationError);
  CHECK_THROWS_AS(estimate_jump(d, 0.0, {0, 4}), ValidationError);
}

TEST_CASE("jump estimate converges with smooth background") {
  const double c = 0.8;
  auto f = [&](double x) { return c * std::fabs(x - 0.3) + std::sin(3.0 * x) + x * x * x; };
  double prev_err = INFINITY;
  double prev_h = 0.0;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto xs = samples_around(0.3, h, 60);
    const double jump = estimate_jump(central_derivative(sample(xs, f), 1), 0.3).magnitude;
    const double err = std::fabs(jump - 2.0 * c);
    if (prev_h > 0.0) CHECK(std::log(prev_err / err) / std::log(prev_h / h) >= 1.0);
    prev_err = err;
    prev_h = h;
  }
}

TEST_CASE("fit_log_divergence on exact data") {
  const auto xs = midpoint_samples(-1.0, 1.0, 400);
  const ParamScan s = sample(xs, [](double x) { return 0.5 * std::log(std::fabs(x - 0.2)) + 1.0; });
  const SingularityReport r = fit_log_divergence(s, 0.2, LogWindow::from_step(s.step()));
  CHECK(r.kind == SingularityKind::log_divergence);
  CHECK(r.fit.a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.fit.b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.residual() < 1e-10);
  REQUIRE(r.left_fit);
  REQUIRE(r.right_fit);
  CHECK(r.left_fit->a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.log_preferred());
  CHECK_THROWS_AS(fit_log_divergence(s, 0.2, {0.0, s.step() * 3}), ValidationError);
  CHECK_THROWS_AS(fit_log_divergence(s, 0.2, {0.1, 0.05}), ValidationError);
}

TEST_CASE("one-sided log window near the scan edge") {
  const auto xs = midpoint_samples(0.0, 1.0, 200);
  const ParamScan s = sample(xs, [](double x) { return -2.0 * std::log(std::fabs(x - 0.01)); });
  const SingularityReport r = fit_log_divergence(s, 0.01, {0.001, 0.2});
  CHECK_FALSE(r.left_fit);
  REQUIRE(r.right_fit);
  CHECK(r.fit.a == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("locate helpers and richardson") {
  const auto xs = midpoint_samples(-1.0, 1.0, 100);
  const ParamScan s = sample(xs, [](double x) { return std::log(std::fabs(x - 0.3)); });
  CHECK(locate_peak(s) == doctest::Approx(0.3).epsilon(1e-12));
  const ParamScan j = sample(xs, [](double x) { return x < -0.4 ? 1.0 : 0.0; });
  CHECK(locate_jump(j) == doctest::Approx(-0.4).epsilon(1e-12));
  // a + c h^2: exact after one extrapolation.
  CHECK(richardson(3.0 + 0.04, 3.0 + 0.01, 2) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(richardson(1.0, 1.0, 0), ValidationError);
}

TEST_CASE("1D Dirac jump equals delta") {
  const double delta = 2.0;
  const auto coarse = dirac_scan(1, delta, -delta, 0.005, 24, RadialIntegrand::simplified);
  const auto fine = dirac_scan(1, delta, -delta, 0.0025, 24, RadialIntegrand::simplified);
  const double jc = estimate_jump(central_derivative(coarse, 1), -delta).magnitude;
  const double jf = estimate_jump(central_derivative(fine, 1), -delta).magnitude;
  CHECK(jc == doctest::Approx(delta).epsilon(1e-3));
  CHECK(richardson(jc, jf, 2) == doctest::Approx(predicted_jump(1, delta, delta)).epsilon(1e-4));
}

TEST_CASE("Ising jump located at 1 - h1") {
  const double h1 = 0.25;
  const auto xs = midpoint_samples(0.5, 1.0, 500);
  const ParamScan e = sample(xs, [&](double h0) { return ising_energy(h0, h1, 8192).value; }, "h0");
  const ParamScan d = central_derivative(e, 1);
  CHECK(std::fabs(locate_jump(d) - 0.75) <= 2e-3);
  CHECK(estimate_jump(d, 0.75).magnitude > 0.0);
}

TEST_CASE("2D Dirac log coefficient") {
  const double delta = 2.0;
  const double h = 1e-4;
  const auto e = dirac_scan(2, delta, -delta, h, 2 * 56, RadialIntegrand::full);
  const ParamScan d2 = central_derivative(e, 2);
  const SingularityReport r = fit_log_divergence(d2, -delta, LogWindow::from_step(h));
  CHECK(r.fit.a == doctest::Approx(delta / pi).epsilon(0.05));
  CHECK(r.fit.a == doctest::Approx(predicted_log_coefficient(2, delta)).epsilon(0.05));
  CHECK(r.log_preferred(10.0));
}

TEST_CASE("odd/even dichotomy") {
  const double delta = 2.0;
  // d = 1: first derivative has a jump, no log.
  {
    const double h = 1e-3;
    const auto e = dirac_scan(1, delta, -delta, h, 2 * 56, RadialIntegrand::full);
    const ParamScan d1 = central_derivative(e, 1);
    const SingularityReport lf = fit_log_divergence(d1, -delta, LogWindow::from_step(h));
    REQUIRE(lf.left_fit);
    REQUIRE(lf.right_fit);
    CHECK(std::fabs(lf.left_fit->a) < 0.05 * predicted_jump(1, delta, delta));
    CHECK(std::fabs(lf.right_fit->a) < 0.05 * predicted_jump(1, delta, delta));
    CHECK(estimate_jump(d1, -delta).magnitude > 0.5 * delta);
  }
  // d = 2: second-derivative "jump" grows under refinement, log fit is stable.
  {
    std::vector<double> jumps;
    std::vector<double> coeffs;
    for (double h : {4e-4, 2e-4, 1e-4}) {
      const auto e = dirac_scan(2, delta, -delta, h, 2 * 56, RadialIntegrand::full);
      const ParamScan d2 = central_derivative(e, 2);
      jumps.push_back(std::fabs(estimate_jump(d2, -delta).left_limit));
      coeffs.push_back(fit_log_divergence(d2, -delta, LogWindow::from_step(h)).fit.a);
    }
    CHECK(jumps[1] > jumps[0]);
    CHECK(jumps[2] > jumps[1]);
    CHECK(coeffs[2] == doctest::Approx(coeffs[1]).epsilon(0.02));
    CHECK(coeffs[1] == doctest::Approx(coeffs[0]).epsilon(0.02));
  }
}

TEST_CASE("predictor examples") {
  CHECK(predicted_jump(1, 2.0, 2.0) == 2.0);
  CHECK(predicted_jump(1, 0.25, 0.25) == 0.25);
  CHECK(predicted_jump(3, 1.0, 1.0) == doctest::Approx(3.0 / pi).epsilon(1e-14));
  CHECK_THROWS_AS(predicted_jump(2, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(predicted_jump(1, 0.0, 1.0), ValidationError);
  CHECK(predicted_log_coefficient(2, 2.0) == doctest::Approx(2.0 / pi).epsilon(1e-14));
  CHECK(predicted_log_coefficient(2, -2.0) == doctest::Approx(2.0 / pi).epsilon(1e-14));
  CHECK(predicted_log_coefficient(4, 1.0) < 0.0);
  CHECK_THROWS_AS(predicted_log_coefficient(3, 1.0), ValidationError);
}

TEST_CASE("predicted_jump(1, delta, delta) is exactly delta") {
  for (double d = 1e-6; d < 1e6; d *= 1.37) CHECK(predicted_jump(1, d, d) == d);
}

TEST_CASE("harmonic_alt equals the harmonic number") {
  double h = 0.0;
  for (int d = 1; d <= 30; ++d) {
    h += 1.0 / d;
    CHECK(std::fabs(harmonic_alt(d) - h) <= 1e-12 * h);
  }
  CHECK(harmonic_alt(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic_alt(0), ValidationError);
}

TEST_CASE("closed forms") {
  CHECK(closed_form_1d(-2.0, 0.0, 3.0, 2.0) == doctest::Approx(4.0 / (2.0 * pi) * 3.0));
  CHECK(closed_form_2d(-2.0, 0.0, 3.0, 2.0) == doctest::Approx(4.0 / (8.0 * pi) * 9.0));
  CHECK(closed_form_1d(1.0, 0.5, 1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(closed_form_1d(0.0, 1.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(closed_form_2d(1.0, 1.0, -1.0, 1.0), ValidationError);
}

TEST_CASE("detect_log_divergence flags a synthetic log peak and rejects a jump") {
  const auto xs = midpoint_samples(-1.0, 1.0, 2000);
  const double h = 0.001;
  const ParamScan lg = sample(xs, [](double x) { return 3.0 * std::log(std::fabs(x)) + x; });
  const LogDetection det = detect_log_divergence(lg, 0.0, 0.05, LogWindow::from_step(h));
  CHECK(det.flagged);
  CHECK(std::fabs(det.peak) <= 2.0 * h);

  const ParamScan step = sample(xs, [](double x) { return (x < 0 ? 1.0 : -1.0) + 0.2 * x; });
  const LogDetection jd = detect_log_divergence(step, 0.0, 0.05, LogWindow::from_step(h));
  CHECK_FALSE(jd.flagged);
}
