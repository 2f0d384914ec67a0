#include <qbattery/cli.hpp>
#include <qbattery/errors.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <system_error>

#include <fmt/format.h>

namespace qbattery::cli {

using nlohmann::json;

namespace {

class Evaluator {
 public:
  Evaluator(const RunConfig& cfg, std::optional<double> t1, const Execution& exec)
      : cfg_(cfg), exec_(exec) {
    settings_.shell.cutoff = cfg.cutoff;
    settings_.shell.panels = cfg.panels;
    settings_.integrand = cfg.integrand;
    settings_.convention = cfg.convention;
    if (cfg.model == ModelFamily::ising) settings_.ising_points = cfg.grid_points();
    if (cfg.model == ModelFamily::haldane) {
      table_.emplace(t1.value_or(cfg.t1), cfg.m, cfg.a, cfg.grid_points(), exec);
    }
  }

  /// Energies at xs, in order.
  std::vector<EnergyTotal> evaluate(const std::vector<double>& xs) const {
    std::vector<EnergyTotal> out(xs.size());
    if (table_) {
      // One point at a time; the Brillouin-zone sum is the parallel part.
      for (std::size_t i = 0; i < xs.size(); ++i) out[i] = at(xs[i], exec_);
    } else {
      parallel_for(xs.size(), [&](std::size_t i) { out[i] = at(xs[i], Execution{1}); }, exec_);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(out[i].value)) {
        throw NumericError(fmt::format("non-finite stored energy at {} = {:.17g}",
                                       cfg_.parameter(), xs[i]));
      }
    }
    return out;
  }

 private:
  EnergyTotal at(double x, const Execution& exec) const {
    try {
      if (table_) return table_->stored_energy(x, cfg_.delta, cfg_.tau, cfg_.convention, exec);
      EnergySettings s = settings_;
      s.exec = exec;
      switch (cfg_.model) {
        case ModelFamily::dirac1d:
          return stored_energy(QuenchSpec::dirac(1, x, cfg_.delta), s);
        case ModelFamily::dirac2d:
          return stored_energy(QuenchSpec::dirac(2, x, cfg_.delta), s);
        case ModelFamily::ising:
          return stored_energy(QuenchSpec::ising(x, cfg_.delta), s);
        case ModelFamily::haldane:
          break;
      }
      throw ValidationError("unsupported model");
    } catch (const ValidationError& e) {
      throw ValidationError(
          fmt::format("{} = {:.17g}: {}", cfg_.parameter(), x, e.what()));
    } catch (const NumericError&) {
      throw;
    } catch (const std::exception& e) {
      throw NumericError(fmt::format("{} = {:.17g}: {}", cfg_.parameter(), x, e.what()));
    }
  }

  const RunConfig& cfg_;
  Execution exec_;
  EnergySettings settings_;
  std::optional<HaldaneTable> table_;
};

ParamScan restrict_to(const ParamScan& s, double centre, double radius) {
  if (radius <= 0.0) return s;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::fabs(s.x()[i] - centre) <= radius) {
      xs.push_back(s.x()[i]);
      ys.push_back(s.y()[i]);
    }
  }
  if (xs.size() < 2) {
    throw ValidationError(fmt::format("fewer than 2 samples within {} of {}", radius, centre));
  }
  return ParamScan(s.parameter(), std::move(xs), std::move(ys));
}

json fit_json(const CurveFit& f) {
  return {{"a", f.a}, {"b", f.b}, {"residual", f.residual}, {"samples", f.samples}};
}

// Jump of the derivative from a local scan of spacing h centred on x_c.
double local_jump(const Evaluator& ev, const RunConfig& cfg, const Analysis& an, double x_c,
                  double h) {
  const std::size_t per_side = an.exclusion + an.window + 2;
  const std::vector<double> xs = samples_around(x_c, h, 2 * per_side);
  const std::vector<EnergyTotal> e = ev.evaluate(xs);
  std::vector<double> ys;
  for (const auto& t : e) ys.push_back(t.value);
  const ParamScan energy(cfg.parameter(), xs, std::move(ys));
  const ParamScan deriv = central_derivative(energy, an.derivative);
  return estimate_jump(deriv, x_c, {an.exclusion, an.window}).magnitude;
}

json run_analysis(const Analysis& an, const ParamScan& d1, const ParamScan& d2,
                  const Evaluator& ev, const RunConfig& cfg) {
  const ParamScan& deriv = an.derivative == 1 ? d1 : d2;
  const double h = deriv.step();
  json j;
  j["derivative"] = an.derivative;
  if (an.kind == Analysis::Kind::jump) {
    double x_c;
    if (an.at) {
      x_c = *an.at;
    } else {
      const double centre = 0.5 * (cfg.scan.start + cfg.scan.stop);
      x_c = locate_jump(restrict_to(deriv, centre, an.search_radius));
    }
    const SingularityReport r = estimate_jump(deriv, x_c, {an.exclusion, an.window});
    j["kind"] = std::string(to_string(r.kind));
    j["location"] = r.location;
    j["located"] = !an.at.has_value();
    j["magnitude"] = r.magnitude;
    j["left_limit"] = r.left_limit;
    j["right_limit"] = r.right_limit;
    if (an.richardson) {
      const double coarse = local_jump(ev, cfg, an, x_c, h);
      const double fine = local_jump(ev, cfg, an, x_c, 0.5 * h);
      j["richardson"] = {{"coarse", coarse}, {"fine", fine}, {"order", 2},
                         {"extrapolated", richardson(coarse, fine, 2)}};
    }
  } else {
    const LogWindow w{an.r_min_steps * h, an.r_max_steps * h};
    const double radius = an.search_radius > 0.0 ? an.search_radius : w.r_max;
    const LogDetection det = detect_log_divergence(deriv, *an.at, radius, w);
    const SingularityReport& r = det.report;
    j["kind"] = std::string(to_string(r.kind));
    j["location"] = r.location;
    j["peak"] = det.peak;
    j["flagged"] = det.flagged;
    j["a"] = r.fit.a;
    j["b"] = r.fit.b;
    j["residual"] = r.residual();
    j["linear_residual"] = r.linear_residual;
    j["pooled_residual"] = r.fit.residual;
    j["window"] = {w.r_min, w.r_max};
    if (r.left_fit) j["left"] = fit_json(*r.left_fit);
    if (r.right_fit) j["right"] = fit_json(*r.right_fit);
  }
  return j;
}

json predictions_for(const RunConfig& cfg) {
  const double d = cfg.delta;
  switch (cfg.model) {
    case ModelFamily::dirac1d:
      return {{"critical", {-d}}, {"jump", predicted_jump(1, d, std::fabs(d))}};
    case ModelFamily::dirac2d:
      return {{"critical", {-d}}, {"log_coefficient", predicted_log_coefficient(2, d)}};
    case ModelFamily::ising:
      return {{"critical", {1.0 - d, -1.0 - d}}, {"jump_claimed", std::fabs(d)}};
    case ModelFamily::haldane: {
      const double tc = critical_t2(cfg.m);
      return {{"critical", {tc - d, -tc - d}}, {"initial_critical", {tc, -tc}}};
    }
  }
  return json::object();
}

}  // namespace

ScanResult run_scan(const RunConfig& cfg, const Execution& exec) {
  const std::vector<double> xs = midpoint_samples(cfg.scan.start, cfg.scan.stop, cfg.scan.steps);
  ScanResult result;
  std::vector<std::optional<double>> series;
  if (cfg.t1_series.empty()) {
    series.push_back(std::nullopt);
  } else {
    for (double t : cfg.t1_series) series.push_back(t);
  }

  std::size_t dropped_total = 0;
  std::size_t dropped_max = 0;
  json per_series = json::array();
  for (const auto& t1 : series) {
    const Evaluator ev(cfg, t1, exec);
    const std::vector<EnergyTotal> e = ev.evaluate(xs);

    SeriesResult sr;
    sr.t1 = t1;
    std::vector<double> ys;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sr.rows.push_back({xs[i], e[i].value, std::nullopt, std::nullopt, e[i].dropped_modes});
      ys.push_back(e[i].value);
      dropped_total += e[i].dropped_modes;
      dropped_max = std::max(dropped_max, e[i].dropped_modes);
    }
    const ParamScan energy(cfg.parameter(), xs, ys);
    const ParamScan d1 = central_derivative(energy, 1);
    const ParamScan d2 = central_derivative(energy, 2);
    for (std::size_t i = 0; i < d1.size(); ++i) {
      sr.rows[i + 1].d1 = d1.y()[i];
      sr.rows[i + 1].d2 = d2.y()[i];
    }
    for (const auto& an : cfg.analyses) {
      json j = run_analysis(an, d1, d2, ev, cfg);
      if (t1) j["t1"] = *t1;
      sr.singularities.push_back(std::move(j));
    }

    const auto peak = std::max_element(ys.begin(), ys.end());
    json s = {{"max_energy", *peak}, {"argmax", xs[peak - ys.begin()]}};
    if (t1) s["t1"] = *t1;
    per_series.push_back(std::move(s));
    result.series.push_back(std::move(sr));
  }

  result.predictions = predictions_for(cfg);
  json& diag = result.diagnostics;
  diag["points"] = xs.size();
  diag["step"] = (cfg.scan.stop - cfg.scan.start) / static_cast<double>(cfg.scan.steps);
  diag["dropped_modes"] = dropped_total;
  diag["max_dropped_per_point"] = dropped_max;
  diag["series"] = per_series;
  switch (cfg.model) {
    case ModelFamily::dirac1d:
    case ModelFamily::dirac2d:
      diag["grid"] = {{"panels", cfg.panels}, {"cutoff", cfg.cutoff}};
      break;
    case ModelFamily::ising:
      diag["grid"] = {{"n_k", cfg.grid_points()}};
      break;
    case ModelFamily::haldane:
      diag["grid"] = {{"n1", cfg.grid_points()}, {"n2", cfg.grid_points()}};
      break;
  }
  return result;
}

std::string format_csv(const std::vector<ScanRow>& rows) {
  std::string out = "x,energy,d1_energy,d2_energy,dropped_modes\n";
  for (const auto& r : rows) {
    out += fmt::format("{:.17g},{:.17g},", r.x, r.energy);
    if (r.d1) out += fmt::format("{:.17g}", *r.d1);
    out += ',';
    if (r.d2) out += fmt::format("{:.17g}", *r.d2);
    out += fmt::format(",{}\n", r.dropped);
  }
  return out;
}

json make_report(const RunConfig& cfg, const ScanResult& result) {
  json sing = json::array();
  for (const auto& s : result.series) {
    for (const auto& j : s.singularities) sing.push_back(j);
  }
  return {{"model", std::string(to_string(cfg.model))},
          {"config", cfg.to_json()},
          {"singularities", sing},
          {"predictions", result.predictions},
          {"diagnostics", result.diagnostics}};
}

std::filesystem::path series_path(const RunConfig& cfg, const SeriesResult& s) {
  std::filesystem::path p(cfg.csv_path);
  if (!s.t1) return p;
  const std::string name =
      fmt::format("{}.t1-{}{}", p.stem().string(), *s.t1, p.extension().string());
  return p.parent_path() / name;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qbattery::cli
