#include <qbattery/cli.hpp>

#include <iostream>

#include <CLI11.hpp>

int main(int argc, char** argv) {
  using namespace qbattery::cli;
  CLI::App app{"Stored energy of double-quench quantum batteries"};
  app.require_subcommand(1);

  ScanCommand scan;
  auto* scan_cmd = app.add_subcommand("scan", "Run a parameter scan from a JSON config");
  scan_cmd->add_option("--config", scan.config, "Config file")->required();
  scan_cmd->add_option("--out", scan.csv, "CSV output path");
  scan_cmd->add_option("--report", scan.report, "JSON report path");
  scan_cmd->add_option("--set", scan.overrides, "Override a config field, key=value")
      ->take_all();

  int dim = 1;
  double delta = 0.0;
  auto* predict_cmd = app.add_subcommand("predict", "Analytic jump / log coefficient");
  predict_cmd->add_option("--dim", dim, "Spatial dimension")->required();
  predict_cmd->add_option("--delta", delta, "Quench increment")->required();

  PhaseOptions phase;
  auto* phase_cmd = app.add_subcommand("phase", "Haldane phase and Chern number");
  phase_cmd->add_option("--m", phase.m, "Staggered potential")->required();
  phase_cmd->add_option("--t2", phase.t2, "Next-nearest-neighbour hopping")->required();
  phase_cmd->add_option("--t1", phase.t1, "Nearest-neighbour hopping");
  phase_cmd->add_flag("--numeric-chern", phase.numeric, "Also compute the lattice Chern number");
  phase_cmd->add_option("--grid", phase.grid, "Grid size for --numeric-chern");
  phase_cmd->add_option("--tol", phase.tolerance, "Mass below which the point is critical");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (*scan_cmd) return cmd_scan(scan, std::cout, std::cerr);
  if (*predict_cmd) return cmd_predict(dim, delta, std::cout, std::cerr);
  return cmd_phase(phase, std::cout, std::cerr);
}
