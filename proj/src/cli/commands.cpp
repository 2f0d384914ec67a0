#include <qbattery/cli.hpp>
#include <qbattery/errors.hpp>

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

namespace qbattery::cli {

using nlohmann::json;

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace

json predict_report(int dim, double delta) {
  if (dim < 1) throw ValidationError("dimension must be >= 1");
  if (!std::isfinite(delta) || delta == 0.0) throw ValidationError("delta must be finite and nonzero");
  using boost::multiprecision::cpp_rational;
  cpp_rational h = 0;
  for (int k = 1; k <= dim; ++k) h += cpp_rational(1, k);
  json j = {{"dim", dim},
            {"delta", delta},
            {"sphere_surface", sphere_surface(dim)},
            {"harmonic", h.convert_to<double>()},
            {"harmonic_fraction", h.str()}};
  if (dim % 2 == 1) {
    j["kind"] = "jump";
    j["jump"] = predicted_jump(dim, delta, std::fabs(delta));
  } else {
    j["kind"] = "log_divergence";
    j["log_coefficient"] = predicted_log_coefficient(dim, delta);
  }
  return j;
}

json phase_report(const PhaseOptions& opt) {
  for (double v : {opt.m, opt.t2, opt.t1, opt.tolerance}) {
    if (!std::isfinite(v)) throw ValidationError("phase parameters must be finite");
  }
  if (opt.tolerance < 0.0) throw ValidationError("tolerance must be >= 0");
  const HaldaneParams p{opt.t1, opt.t2, opt.m, 1.0};
  const auto [mK, mKp] = haldane_masses(p);
  json j = {{"m", opt.m},
            {"t2", opt.t2},
            {"t1", opt.t1},
            {"masses", {{"K", mK}, {"K_prime", mKp}}},
            {"t2_critical", critical_t2(opt.m)}};
  if (std::fabs(mK) <= opt.tolerance || std::fabs(mKp) <= opt.tolerance) {
    j["phase"] = "critical";
    j["chern"] = nullptr;
    return j;
  }
  const int c = chern_sign(p);
  j["phase"] = c == 0 ? "trivial" : "topological";
  j["chern"] = c;
  if (opt.numeric) {
    j["chern_numeric"] = chern_numeric(p, opt.grid);
    j["chern_grid"] = opt.grid;
  }
  return j;
}

int cmd_predict(int dim, double delta, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << predict_report(dim, delta).dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_phase(const PhaseOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << phase_report(opt).dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_scan(const ScanCommand& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    json doc = load_json(c.config);
    for (const auto& o : c.overrides) apply_override(doc, o);
    if (!c.csv.empty()) doc["output"]["csv"] = c.csv;
    if (!c.report.empty()) doc["output"]["report"] = c.report;
    const RunConfig cfg = parse_config(doc);
    if (cfg.csv_path.empty() && !cfg.t1_series.empty()) {
      throw ValidationError("a t1 series needs an output CSV path");
    }

    // Everything is computed before anything is written.
    const ScanResult result = run_scan(cfg, Execution{});
    const json report = make_report(cfg, result);

    if (cfg.csv_path.empty()) {
      out << format_csv(result.series.front().rows);
    } else {
      for (const auto& s : result.series) write_atomic(series_path(cfg, s), format_csv(s.rows));
    }
    if (!cfg.report_path.empty()) write_atomic(cfg.report_path, report.dump(2) + "\n");
    if (!cfg.csv_path.empty() && cfg.report_path.empty()) out << report.dump(2) << '\n';
    return kExitOk;
  });
}

}  // namespace qbattery::cli
