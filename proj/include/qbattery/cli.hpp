#ifndef QBATTERY_CLI_HPP
#define QBATTERY_CLI_HPP

#include <qbattery/criticality.hpp>
#include <qbattery/execution.hpp>
#include <qbattery/models.hpp>
#include <qbattery/quadrature.hpp>
#include <qbattery/types.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace qbattery::cli {

enum ExitCode : int { kExitOk = 0, kExitNumeric = 1, kExitValidation = 2 };

struct ScanRange {
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 0;
};

/// One requested analysis of a derivative column.
struct Analysis {
  enum class Kind { jump, log_divergence };
  Kind kind = Kind::jump;
  int derivative = 1;          ///< 1 or 2
  std::optional<double> at;    ///< known critical value; located when absent
  double search_radius = 0.0;  ///< 0 = whole scan
  std::size_t exclusion = 2;   ///< jump only
  std::size_t window = 4;      ///< jump only
  bool richardson = false;     ///< jump only: extra local scans at h and h/2
  double r_min_steps = 2.0;    ///< log only, in units of the scan step
  double r_max_steps = 50.0;
};

struct RunConfig {
  ModelFamily model = ModelFamily::ising;
  ScanRange scan;
  double delta = 0.0;
  double t1 = 1.0;
  double m = 1.0;
  double a = 1.0;
  std::vector<double> t1_series;  ///< Haldane only: one CSV per value
  double cutoff = 10.0;
  std::size_t panels = 512;
  RadialIntegrand integrand = RadialIntegrand::full;
  std::size_t grid = 0;  ///< Ising N_k or Haldane N; 0 = model default
  std::optional<double> tau;
  EnergyConvention convention = EnergyConvention::per_mode;
  std::vector<Analysis> analyses;
  std::string csv_path;
  std::string report_path;

  /// Name of the scanned coupling: mA, h0 or t2.
  std::string parameter() const;
  std::size_t grid_points() const;
  nlohmann::json to_json() const;
};

/// Builds a RunConfig from a JSON document. Unknown keys and out-of-range
/// values throw ValidationError.
RunConfig parse_config(const nlohmann::json& doc);

/// Applies "dotted.key=value" to a JSON document; value is read as JSON when
/// it parses, otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

nlohmann::json load_json(const std::filesystem::path& path);

struct ScanRow {
  double x = 0.0;
  double energy = 0.0;
  std::optional<double> d1;
  std::optional<double> d2;
  std::size_t dropped = 0;
};

struct SeriesResult {
  std::optional<double> t1;  ///< set for Haldane t1 series
  std::vector<ScanRow> rows;
  nlohmann::json singularities = nlohmann::json::array();
};

struct ScanResult {
  std::vector<SeriesResult> series;
  nlohmann::json predictions = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();
};

/// Evaluates the stored energy over the scan, its central derivatives and
/// the requested analyses. Non-finite energies throw NumericError naming the
/// parameter value.
ScanResult run_scan(const RunConfig& cfg, const Execution& exec = {});

/// Fixed-column CSV: x,energy,d1_energy,d2_energy,dropped_modes.
std::string format_csv(const std::vector<ScanRow>& rows);

/// Summary {model, config, singularities, predictions, diagnostics}.
nlohmann::json make_report(const RunConfig& cfg, const ScanResult& result);

/// CSV path for series i (the configured path, or `stem.t1-<value>.csv`).
std::filesystem::path series_path(const RunConfig& cfg, const SeriesResult& s);

/// Writes via a temporary sibling and rename, so readers never see a
/// partial file.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct PhaseOptions {
  double m = 1.0;
  double t2 = 0.0;
  double t1 = 1.0;
  bool numeric = false;
  std::size_t grid = 48;
  double tolerance = 1e-9;  ///< |mass| at or below this counts as critical
};

nlohmann::json predict_report(int dim, double delta);
nlohmann::json phase_report(const PhaseOptions& opt);

struct ScanCommand {
  std::string config;
  std::string csv;     ///< overrides output.csv when set
  std::string report;  ///< overrides output.report when set
  std::vector<std::string> overrides;
};

// Command drivers: print JSON (or CSV) to `out`, errors to `err`, and
// return an ExitCode.
int cmd_scan(const ScanCommand& c, std::ostream& out, std::ostream& err);
int cmd_predict(int dim, double delta, std::ostream& out, std::ostream& err);
int cmd_phase(const PhaseOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace qbattery::cli

#endif  // QBATTERY_CLI_HPP
