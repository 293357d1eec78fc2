#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <qnls/presets.hpp>
#include <qnls/runner.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Radial quasilinear Schrodinger equation: runs, criteria, sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string sweep_dir;
  std::string emit_name;
  int jobs = 2;

  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario from a config file");
  run_cmd->add_option("--config", config_path, "Scenario config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (default: current)");

  CLI::App* check_cmd =
      app.add_subcommand("check", "Evaluate the analytic criteria for a config (no run)");
  check_cmd->add_option("--config", config_path, "Scenario config file")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run every *.cfg in a directory");
  sweep_cmd->add_option("--dir", sweep_dir, "Directory holding the configs")->required();
  sweep_cmd->add_option("--jobs", jobs, "Concurrent workers (default 2)");

  CLI::App* presets_cmd = app.add_subcommand("presets", "List the built-in presets");
  presets_cmd->add_option("--emit", emit_name, "Print the canonical config of one preset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      qnls::Scenario sc = qnls::load_scenario_file(config_path);
      qnls::RunReport report = qnls::run_scenario(sc, out_dir);
      std::printf("%s: %s\n", report.scenario_id.c_str(), qnls::status_name(report.status));
      for (const qnls::BoundRow& row : report.bounds)
        std::printf("  %-26s lhs=%-12.6g rhs=%-12.6g %s\n", row.name.c_str(), row.computed_lhs,
                    row.paper_rhs, row.satisfied ? "ok" : "VIOLATED");
      std::printf("  drift: mass=%.3g energy=%.3g wall_ratio=%.3g\n", report.drift_mass,
                  report.drift_energy, report.wall_ratio_max);
      return report.exit_ok ? 0 : 1;
    }
    if (check_cmd->parsed()) {
      qnls::Scenario sc = qnls::load_scenario_file(config_path);
      std::cout << qnls::criteria_to_json(qnls::check_scenario(sc)).dump();
      return 0;
    }
    if (sweep_cmd->parsed()) return qnls::sweep_directory(sweep_dir, jobs);
    if (presets_cmd->parsed()) {
      if (!emit_name.empty()) {
        std::optional<qnls::Scenario> sc = qnls::find_preset(emit_name);
        if (!sc) {
          std::fprintf(stderr, "unknown preset '%s'\n", emit_name.c_str());
          return 2;
        }
        std::cout << sc->to_config_text();
        return 0;
      }
      for (const qnls::Scenario& sc : qnls::builtin_presets())
        std::printf("%-6s  %-10s  h=%-22s f1=%-28s f2=%-18s A=%g\n", sc.id.c_str(),
                    qnls::sign_name(sc.sign).c_str(), sc.h.describe().c_str(),
                    sc.f1.describe().c_str(), sc.f2.describe().c_str(), sc.coupling);
      return 0;
    }
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 2;
  }
  return 0;
}
