#pragma once

#include <limits>
#include <memory>
#include <string>

#include <qnls/diagnostics.hpp>
#include <qnls/dynamics.hpp>
#include <qnls/nonlinearity.hpp>
#include <qnls/radial_grid.hpp>

namespace qnls {

enum class InitialFamily { Gaussian, Bubble, Zero };

const char* initial_family_name(InitialFamily family);

/// amplitude * profile(r / width-ish) * exp(i chirp r^2); Zero ignores the
/// parameters.
struct InitialSpec {
  InitialFamily family = InitialFamily::Gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  double chirp = 0.0;
};

struct GridSpec {
  int dimension = 3;
  double r_max = 40.0;
  int nodes = 4096;
};

/// Which post-run analyses to perform, plus their parameters.
struct AnalysisSet {
  bool virial = false;
  bool pseudoconformal = false;
  bool morawetz = false;
  bool spacetime = false;
  bool decay = false;
  bool criteria = false;
  WeightSpec::Kind morawetz_weight = WeightSpec::Kind::Unit;
  double morawetz_theta = 0.75;
  double morawetz_mu = 2.0;
  double morawetz_sigma = 4.0;
  double spacetime_p = std::numeric_limits<double>::quiet_NaN();
  double spacetime_q = std::numeric_limits<double>::quiet_NaN();
  double spacetime_r = std::numeric_limits<double>::quiet_NaN();
  double decay_t_min = 1.0;
};

/// A complete, validated run description: model, grid, initial data, solver
/// parameters and requested analyses.  Produced by the config parser or the
/// built-in presets; `to_config_text` renders the canonical config that
/// parses back to an identical scenario.
struct Scenario {
  std::string id = "scenario";
  int dimension = 3;
  ScalarFamily h;
  ScalarFamily f1;
  ScalarFamily f2;
  double coupling = 0.0;
  CriticalSign sign = CriticalSign::Absent;
  GridSpec grid;
  InitialSpec initial;
  SolverConfig solver;
  AnalysisSet analyses;

  NonlinearityModel make_model() const;
  std::shared_ptr<const RadialGrid> make_grid() const;
  RadialField make_initial(const std::shared_ptr<const RadialGrid>& grid_ptr) const;
  std::string to_config_text() const;
};

/// Parses the sectioned `key = value` config format.  Sections are [model],
/// [grid], [initial], [solver] and [analyses]; the optional top-level key
/// `id` precedes the first section.  Unknown sections or keys, malformed
/// numbers, and inconsistent settings raise std::invalid_argument naming the
/// line.  Decimal values convert exactly once to binary via from_chars.
Scenario parse_scenario_text(const std::string& text);

/// Reads and parses one config file; errors are prefixed with the path.
Scenario load_scenario_file(const std::string& path);

}  // namespace qnls
