#include <qbattery/cli.hpp>
#include <qbattery/errors.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace qbattery::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ValidationError(fmt::format("unknown key '{}' in {}", key, where));
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(fmt::format("{}.{} must be a number", where, key));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(fmt::format("{}.{} must be finite", where, key));
  return x;
}

double number_or(const json& obj, const std::string& key, double fallback,
                 const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::size_t count_or(const json& obj, const std::string& key, std::size_t fallback,
                     const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ValidationError(fmt::format("{}.{} must be a non-negative integer", where, key));
  }
  return v.get<std::size_t>();
}

std::string string_at(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(fmt::format("{}.{} must be a string", where, key));
  return v.get<std::string>();
}

Analysis parse_analysis(const json& a, std::size_t index) {
  const std::string where = fmt::format("analysis[{}]", index);
  if (!a.is_object()) throw ValidationError(where + " must be an object");
  reject_unknown(a,
                 {"type", "derivative", "at", "search_radius", "exclusion", "window",
                  "richardson", "r_min_steps", "r_max_steps"},
                 where);
  if (!a.contains("type")) throw ValidationError(where + " needs a type");
  Analysis out;
  const std::string type = string_at(a, "type", where);
  if (type == "jump") {
    out.kind = Analysis::Kind::jump;
    out.derivative = 1;
  } else if (type == "log") {
    out.kind = Analysis::Kind::log_divergence;
    out.derivative = 2;
  } else {
    throw ValidationError(fmt::format("{}.type must be 'jump' or 'log', got '{}'", where, type));
  }
  out.derivative = static_cast<int>(count_or(a, "derivative", out.derivative, where));
  if (out.derivative != 1 && out.derivative != 2) {
    throw ValidationError(where + ".derivative must be 1 or 2");
  }
  if (a.contains("at")) out.at = number(a, "at", where);
  out.search_radius = number_or(a, "search_radius", 0.0, where);
  if (out.search_radius < 0.0) throw ValidationError(where + ".search_radius must be >= 0");
  out.exclusion = count_or(a, "exclusion", out.exclusion, where);
  out.window = count_or(a, "window", out.window, where);
  if (out.exclusion < 1 || out.window < 2) {
    throw ValidationError(where + " needs exclusion >= 1 and window >= 2");
  }
  if (a.contains("richardson")) {
    if (!a.at("richardson").is_boolean()) throw ValidationError(where + ".richardson must be bool");
    out.richardson = a.at("richardson").get<bool>();
  }
  out.r_min_steps = number_or(a, "r_min_steps", out.r_min_steps, where);
  out.r_max_steps = number_or(a, "r_max_steps", out.r_max_steps, where);
  if (!(out.r_min_steps >= 0.0) || !(out.r_max_steps > out.r_min_steps)) {
    throw ValidationError(where + " needs 0 <= r_min_steps < r_max_steps");
  }
  if (out.kind == Analysis::Kind::log_divergence && !out.at) {
    throw ValidationError(where + ": log analysis needs the critical value 'at'");
  }
  return out;
}

json analysis_json(const Analysis& a) {
  json j;
  if (a.kind == Analysis::Kind::jump) {
    j = {{"type", "jump"}, {"derivative", a.derivative}, {"exclusion", a.exclusion},
         {"window", a.window}, {"richardson", a.richardson}};
  } else {
    j = {{"type", "log"}, {"derivative", a.derivative}, {"r_min_steps", a.r_min_steps},
         {"r_max_steps", a.r_max_steps}};
  }
  if (a.at) j["at"] = *a.at;
  if (a.search_radius > 0.0) j["search_radius"] = a.search_radius;
  return j;
}

}  // namespace

std::string RunConfig::parameter() const {
  switch (model) {
    case ModelFamily::dirac1d:
    case ModelFamily::dirac2d:
      return "mA";
    case ModelFamily::ising:
      return "h0";
    case ModelFamily::haldane:
      return "t2";
  }
  return "x";
}

std::size_t RunConfig::grid_points() const {
  if (grid != 0) return grid;
  const EnergySettings defaults;
  return model == ModelFamily::haldane ? defaults.haldane_points : defaults.ising_points;
}

json RunConfig::to_json() const {
  json j;
  j["model"] = std::string(to_string(model));
  j["scan"] = {{"start", scan.start}, {"stop", scan.stop}, {"steps", scan.steps}};
  j["delta"] = delta;
  switch (model) {
    case ModelFamily::dirac1d:
    case ModelFamily::dirac2d:
      j["cutoff"] = cutoff;
      j["panels"] = panels;
      j["integrand"] = std::string(to_string(integrand));
      break;
    case ModelFamily::ising:
      j["grid"] = grid_points();
      j["convention"] = std::string(to_string(convention));
      break;
    case ModelFamily::haldane:
      j["t1"] = t1;
      j["m"] = m;
      j["a"] = a;
      if (!t1_series.empty()) j["t1_series"] = t1_series;
      j["grid"] = grid_points();
      j["convention"] = std::string(to_string(convention));
      if (tau) j["tau"] = *tau;
      break;
  }
  json list = json::array();
  for (const auto& an : analyses) list.push_back(analysis_json(an));
  j["analysis"] = list;
  json out = json::object();
  if (!csv_path.empty()) out["csv"] = csv_path;
  if (!report_path.empty()) out["report"] = report_path;
  j["output"] = out;
  return j;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  reject_unknown(doc,
                 {"model", "scan", "delta", "t1", "m", "a", "t1_series", "cutoff", "panels",
                  "integrand", "grid", "tau", "convention", "analysis", "output"},
                 "config");
  for (const char* key : {"model", "scan", "delta"}) {
    if (!doc.contains(key)) throw ValidationError(fmt::format("config needs '{}'", key));
  }
  RunConfig c;
  try {
    c.model = model_family_from_string(string_at(doc, "model", "config"));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }

  const json& s = doc.at("scan");
  if (!s.is_object()) throw ValidationError("scan must be an object");
  reject_unknown(s, {"start", "stop", "steps"}, "scan");
  for (const char* key : {"start", "stop", "steps"}) {
    if (!s.contains(key)) throw ValidationError(fmt::format("scan needs '{}'", key));
  }
  c.scan.start = number(s, "start", "scan");
  c.scan.stop = number(s, "stop", "scan");
  c.scan.steps = count_or(s, "steps", 0, "scan");
  if (c.scan.steps < 8) throw ValidationError("scan.steps must be >= 8");
  if (!(c.scan.start < c.scan.stop)) throw ValidationError("scan needs start < stop");

  c.delta = number(doc, "delta", "config");
  if (c.delta == 0.0) throw ValidationError("delta must be nonzero");

  const bool dirac = c.model == ModelFamily::dirac1d || c.model == ModelFamily::dirac2d;
  const bool haldane = c.model == ModelFamily::haldane;
  auto only_for = [&](const char* key, bool allowed) {
    if (doc.contains(key) && !allowed) {
      throw ValidationError(
          fmt::format("'{}' does not apply to model {}", key, to_string(c.model)));
    }
  };
  only_for("t1", haldane);
  only_for("m", haldane);
  only_for("a", haldane);
  only_for("t1_series", haldane);
  only_for("tau", haldane);
  only_for("cutoff", dirac);
  only_for("panels", dirac);
  only_for("integrand", dirac);
  only_for("grid", !dirac);
  only_for("convention", !dirac);

  c.t1 = number_or(doc, "t1", c.t1, "config");
  c.m = number_or(doc, "m", c.m, "config");
  c.a = number_or(doc, "a", c.a, "config");
  if (!(c.a > 0.0)) throw ValidationError("lattice constant a must be positive");
  if (doc.contains("t1_series")) {
    const json& ts = doc.at("t1_series");
    if (!ts.is_array() || ts.empty()) throw ValidationError("t1_series must be a non-empty array");
    for (const auto& v : ts) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw ValidationError("t1_series entries must be finite numbers");
      }
      c.t1_series.push_back(v.get<double>());
    }
  }
  c.cutoff = number_or(doc, "cutoff", c.cutoff, "config");
  if (!(c.cutoff > 0.0)) throw ValidationError("cutoff must be positive");
  c.panels = count_or(doc, "panels", c.panels, "config");
  if (c.panels < 16) throw ValidationError("panels must be >= 16");
  if (doc.contains("integrand")) {
    try {
      c.integrand = radial_integrand_from_string(string_at(doc, "integrand", "config"));
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }
  c.grid = count_or(doc, "grid", 0, "config");
  if (c.grid != 0 && c.grid < (haldane ? 4u : 2u)) throw ValidationError("grid is too small");
  if (doc.contains("tau") && !doc.at("tau").is_null()) {
    c.tau = number(doc, "tau", "config");
    if (*c.tau < 0.0) throw ValidationError("tau must be >= 0");
  }
  if (doc.contains("convention")) {
    try {
      c.convention = energy_convention_from_string(string_at(doc, "convention", "config"));
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }

  if (doc.contains("analysis")) {
    const json& list = doc.at("analysis");
    if (!list.is_array()) throw ValidationError("analysis must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) c.analyses.push_back(parse_analysis(list[i], i));
  }
  for (const auto& an : c.analyses) {
    if (an.at && !(*an.at > c.scan.start && *an.at < c.scan.stop)) {
      throw ValidationError(fmt::format("analysis point {} outside scan range", *an.at));
    }
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    if (!o.is_object()) throw ValidationError("output must be an object");
    reject_unknown(o, {"csv", "report"}, "output");
    if (o.contains("csv")) c.csv_path = string_at(o, "csv", "output");
    if (o.contains("report")) c.report_path = string_at(o, "report", "output");
  }

  // Dirac shell integrals are undefined at mA = 0.
  if (dirac) {
    for (double x : midpoint_samples(c.scan.start, c.scan.stop, c.scan.steps)) {
      if (x == 0.0) throw ValidationError("scan samples mA = 0 where the shell energy is undefined");
    }
  }
  return c;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError(fmt::format("override '{}' is not key=value", assignment));
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t begin = 0;
  while (true) {
    const auto dot = key.find('.', begin);
    const std::string part = key.substr(begin, dot == std::string::npos ? std::string::npos
                                                                        : dot - begin);
    if (part.empty()) throw ValidationError(fmt::format("bad override key '{}'", key));
    if (!node->is_object()) throw ValidationError(fmt::format("override '{}' descends into a non-object", key));
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    begin = dot + 1;
  }
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot read config '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str(), nullptr, false);
  if (doc.is_discarded()) throw ValidationError(fmt::format("'{}' is not valid JSON", path.string()));
  return doc;
}

}  // namespace qbattery::cli
