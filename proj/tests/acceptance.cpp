// Acceptance criteria: one PASS/FAIL line per criterion.
#include <qbattery/criticality.hpp>
#include <qbattery/errors.hpp>
#include <qbattery/kernel.hpp>
#include <qbattery/models.hpp>
#include <qbattery/quadrature.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

using namespace qbattery;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("threw: {}", e.what())};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string timing = fmt::format("{:.2f} s", secs);
  if (budget_s > 0.0) {
    timing += fmt::format(" (budget {:.0f} s)", budget_s);
    if (secs >= budget_s) {
      o.pass = false;
      o.detail += "; over time budget";
    }
  }
  if (!o.pass) ++failures;
  fmt::print("{} AC{:<2} {}: {} [{}]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail, timing);
  std::fflush(stdout);
}

ParamScan energy_scan(const std::vector<double>& xs, const std::function<double(double)>& f,
                      const char* name) {
  std::vector<double> ys;
  ys.reserve(xs.size());
  for (double x : xs) ys.push_back(f(x));
  return ParamScan(name, xs, std::move(ys));
}

double dirac_jump(double delta, double h) {
  const RadialShell shell{1, 10.0, 512};
  const JumpOptions opt;
  const auto xs = samples_around(-delta, h, 2 * (opt.exclusion + opt.window + 2));
  const ParamScan e = energy_scan(
      xs,
      [&](double mA) {
        return dirac_energy_radial(shell, mA, mA + delta, delta, RadialIntegrand::simplified);
      },
      "mA");
  return estimate_jump(central_derivative(e, 1), -delta, opt).magnitude;
}

}  // namespace

int main() {
  criterion(1, "Ising jump location", 10.0, [] {
    const auto xs = midpoint_samples(0.5, 1.0, 500);
    const ParamScan e =
        energy_scan(xs, [](double h0) { return ising_energy(h0, 0.25, 8192).value; }, "h0");
    const double loc = locate_jump(central_derivative(e, 1));
    return Outcome{std::fabs(loc - 0.75) <= 2e-3,
                   fmt::format("located at h0 = {:.6f} (target 0.75 +- 2e-3)", loc)};
  });

  criterion(2, "Ising jump scaling", 0.0, [] {
    std::vector<double> ratios;
    std::string detail;
    for (double h1 : {0.1, 0.2, 0.25}) {
      const double x_c = 1.0 - h1;
      const auto xs = samples_around(x_c, 1e-3, 24);
      const ParamScan e =
          energy_scan(xs, [&](double h0) { return ising_energy(h0, h1, 8192).value; }, "h0");
      const double jump = estimate_jump(central_derivative(e, 1), x_c).magnitude;
      ratios.push_back(jump / h1);
      detail += fmt::format("h1={}: jump/h1={:.5f}; ", h1, jump / h1);
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    const double spread = *hi / *lo - 1.0;
    detail += fmt::format("spread {:.3f}% (limit 2%), constant ~ {:.4f}", 100.0 * spread,
                          (ratios[0] + ratios[1] + ratios[2]) / 3.0);
    return Outcome{spread <= 0.02, detail};
  });

  criterion(3, "1D Dirac jump", 5.0, [] {
    const double coarse = dirac_jump(2.0, 5e-3);
    const double fine = dirac_jump(2.0, 2.5e-3);
    const double ext = richardson(coarse, fine, 2);
    return Outcome{std::fabs(ext - 2.0) <= 0.02 * 2.0,
                   fmt::format("h=5e-3: {:.6f}, h=2.5e-3: {:.6f}, extrapolated {:.6f} (target 2)",
                               coarse, fine, ext)};
  });

  criterion(4, "2D Dirac log coefficient", 30.0, [] {
    const double delta = 2.0;
    const double h = 1e-4;
    const RadialShell shell{2, 10.0, 512};
    const ParamScan e = energy_scan(
        samples_around(-delta, h, 2 * 53),
        [&](double mA) { return dirac_energy_radial(shell, mA, mA + delta, delta); }, "mA");
    const SingularityReport r =
        fit_log_divergence(central_derivative(e, 2), -delta, LogWindow::from_step(h));
    const double target = 2.0 / pi;
    const bool ok = std::fabs(r.fit.a - target) <= 0.05 * target && r.log_preferred(10.0);
    return Outcome{ok, fmt::format("a = {:.5f} (target {:.5f}), residual {:.3g} vs linear {:.3g}"
                                   " (ratio {:.1f}, need >= 10)",
                                   r.fit.a, target, r.residual(), r.linear_residual,
                                   r.linear_residual / r.residual())};
  });

  criterion(5, "Closed-form oracles", 0.0, [] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> um(-5.0, 5.0);
    std::uniform_real_distribution<double> ul(0.05, 20.0);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
      const double mA = um(rng);
      const double mB = um(rng);
      const double cutoff = ul(rng);
      const double dM = mB - mA;
      const double r1 =
          dirac_energy_radial({1, cutoff, 512}, mA, mB, dM, RadialIntegrand::simplified);
      const double r2 =
          dirac_energy_radial({2, cutoff, 512}, mA, mB, dM, RadialIntegrand::simplified);
      const double c1 = closed_form_1d(mA, mB, cutoff, dM);
      const double c2 = closed_form_2d(mA, mB, cutoff, dM);
      worst = std::max({worst, std::fabs(r1 - c1) / std::fabs(c1), std::fabs(r2 - c2) / std::fabs(c2)});
    }
    return Outcome{worst <= 1e-8, fmt::format("worst relative error {:.2e} over 100 triples x 2 dims",
                                              worst)};
  });

  criterion(6, "Haldane criticality", 60.0, [] {
    const HaldaneTable table(1.0, 1.0, 1.0, 512);
    const double h = 2.5e-4;
    const LogWindow w = LogWindow::from_step(h);
    bool ok = true;
    std::string detail;
    for (double x_c : {critical_t2(1.0) - 0.1, -critical_t2(1.0) - 0.1}) {
      const auto xs = samples_around(x_c, h, 2 * 53);
      const ParamScan e =
          energy_scan(xs, [&](double t2) { return table.stored_energy(t2, 0.1).value; }, "t2");
      const LogDetection det = detect_log_divergence(central_derivative(e, 2), x_c, w.r_max, w);
      ok = ok && det.flagged;
      detail += fmt::format("x_c={:.5f}: peak at {:+.2f} steps, a={:.3f}, log/line residual "
                            "{:.3g}/{:.3g} (x{:.1f}) {}; ",
                            x_c, (det.peak - x_c) / h, det.report.fit.a, det.report.residual(),
                            det.report.linear_residual,
                            det.report.linear_residual / det.report.residual(),
                            det.flagged ? "flagged" : "not flagged");
    }
    return Outcome{ok, detail};
  });

  criterion(7, "Haldane topology", 0.0, [] {
    bool ok = chern_sign({1.0, -0.3, 1.0, 1.0}) == -1 && chern_sign({1.0, 0.0, 1.0, 1.0}) == 0 &&
              chern_sign({1.0, 0.3, 1.0, 1.0}) == 1;
    int compared = 0;
    int agree = 0;
    for (double m : {-2.0, -1.0, 0.5, 1.0, 2.0}) {
      for (double t2 : {-0.4, -0.2, 0.0, 0.2, 0.4}) {
        const HaldaneParams p{1.0, t2, m, 1.0};
        const auto [mK, mKp] = haldane_masses(p);
        if (std::min(std::fabs(mK), std::fabs(mKp)) < 0.05) continue;
        ++compared;
        if (chern_numeric(p, 24) == chern_sign(p)) ++agree;
      }
    }
    ok = ok && agree == compared;
    return Outcome{ok, fmt::format("phase table (-1, 0, +1) {}; numeric agrees on {}/{} sweep points",
                                   ok ? "ok" : "wrong", agree, compared)};
  });

  criterion(8, "Haldane flattening", 0.0, [] {
    const auto xs = midpoint_samples(-0.5, 0.3, 200);
    std::vector<double> peaks;
    std::string detail;
    for (double t1 : {0.5, 0.8, 1.5, 3.0, 5.0}) {
      const HaldaneTable table(t1, 1.0, 1.0, 256);
      double peak = 0.0;
      for (double x : xs) peak = std::max(peak, table.stored_energy(x, 0.1).value);
      peaks.push_back(peak);
      detail += fmt::format("t1={}: {:.5f}; ", t1, peak);
    }
    bool ok = true;
    for (std::size_t i = 1; i < peaks.size(); ++i) ok = ok && peaks[i] < peaks[i - 1];
    return Outcome{ok, detail + (ok ? "strictly decreasing" : "not monotone")};
  });

  criterion(9, "Kernel properties", 0.0, [] {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> ut(0.0, 100.0);
    long violations = 0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) {
      const DVector a{u(rng), u(rng), u(rng)};
      const DVector b{u(rng), u(rng), u(rng)};
      const double s = dispersion(a);
      if (std::fabs(f0(a, a)) > 1e-12 * s * s * s * s) ++violations;
      const double lt = mode_energy(a, b).value;
      const double t = mode_energy(a, b, ut(rng)).value;
      if (!(lt >= 0.0) || !(t >= 0.0) || t > 2.0 * lt * (1.0 + 1e-14)) ++violations;
    }
    // Grid totals obey the same bound.
    const BZGrid g = BZGrid::line(2048);
    const BandMap A = dirac_band({1, -2.0});
    const BandMap B = dirac_band({1, 0.0});
    const double lt = total_energy(A, B, g).value;
    for (int i = 0; i < 50; ++i) {
      const double t = total_energy(A, B, g, ut(rng)).value;
      if (!(t >= 0.0) || t > 2.0 * lt) ++violations;
    }
    // Degenerate-direction limit.
    bool eta_ok = true;
    for (int i = 0; i < 100; ++i) {
      const DVector a{u(rng), u(rng), u(rng)};
      const double mB = u(rng);
      const double exact = f0(a, {0, 0, mB});
      double prev = INFINITY;
      for (double eta : {1e-4, 1e-6, 1e-8}) {
        const double rel = std::fabs(f0(a, {eta, eta, mB}) - exact) / exact;
        eta_ok = eta_ok && rel <= prev;
        prev = rel;
      }
      eta_ok = eta_ok && prev < 1e-6;
    }
    return Outcome{violations == 0 && eta_ok,
                   fmt::format("{} violations over {} random pairs; eta-sequence {}", violations,
                               n, eta_ok ? "converges" : "does not converge")};
  });

  criterion(10, "Predictor identities", 0.0, [] {
    bool jump_ok = true;
    for (double d : {0.25, 1.0, 2.0, 3.7, 1e-3, 42.0}) jump_ok = jump_ok && predicted_jump(1, d, d) == d;
    double worst = 0.0;
    double h = 0.0;
    for (int d = 1; d <= 30; ++d) {
      h += 1.0 / d;
      worst = std::max(worst, std::fabs(harmonic_alt(d) - h) / h);
    }
    const bool sph = sphere_surface(1) == 2.0 && sphere_surface(2) == 2.0 * pi &&
                     sphere_surface(3) == 4.0 * pi;
    return Outcome{jump_ok && worst <= 1e-12 && sph,
                   fmt::format("predicted_jump(1,d,d)==d {}; harmonic worst rel {:.1e}; "
                               "sphere_surface(1,2,3) {}",
                               jump_ok ? "exact" : "inexact", worst, sph ? "exact" : "inexact")};
  });

  fmt::print("{} of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
