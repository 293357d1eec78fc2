#pragma once

#include <optional>
#include <string>
#include <vector>

#include <qnls/criteria.hpp>
#include <qnls/dynamics.hpp>
#include <qnls/json_writer.hpp>
#include <qnls/scenario.hpp>

namespace qnls {

/// One asserted (or informational) inequality: lhs computed from the run,
/// rhs the closed-form right side.  Informational rows carry a NaN rhs and
/// never fail.
struct BoundRow {
  std::string name;
  double computed_lhs = 0.0;
  double paper_rhs = 0.0;
  bool satisfied = false;
};

struct RunReport {
  std::string scenario_id;
  RunStatus status = RunStatus::Completed;
  CriteriaReport criteria;
  std::optional<RunOutcome> outcome;
  std::vector<BoundRow> bounds;
  double drift_mass = 0.0;
  double drift_energy = 0.0;
  double wall_ratio_max = 0.0;
  bool exit_ok = false;
};

/// Criteria evaluated on the initial data alone; no time stepping, no files.
CriteriaReport check_scenario(const Scenario& sc);

JsonValue criteria_to_json(const CriteriaReport& report);

/// Full pipeline: criteria first, then the simulation, then the requested
/// analyses.  Writes <id>.series.csv and <id>.summary.json into out_dir
/// (created if missing).  exit_ok is true when the run did not end in
/// IterationFailure and every asserted bound row is satisfied.
RunReport run_scenario(const Scenario& sc, const std::string& out_dir);

/// Runs every *.cfg in dir on a bounded worker pool (ids must be unique),
/// writing each scenario's outputs next to its config and a single
/// index.json after all workers finish.  Returns 0 when every scenario
/// parsed, ran, and satisfied its bounds.
int sweep_directory(const std::string& dir, int jobs);

}  // namespace qnls
