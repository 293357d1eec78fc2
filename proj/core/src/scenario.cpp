#include "qnls/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace qnls {
namespace {

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
}

double parse_double(int line, const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    fail(line, "key '" + key + "': bad number '" + value + "'");
  return out;
}

int parse_int(int line, const std::string& key, const std::string& value) {
  int out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    fail(line, "key '" + key + "': bad integer '" + value + "'");
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

const char* weight_kind_name(WeightSpec::Kind kind) {
  switch (kind) {
    case WeightSpec::Kind::Unit: return "unit";
    case WeightSpec::Kind::PowerOfT: return "power_of_t";
    case WeightSpec::Kind::SpatialProfile: return "spatial_profile";
  }
  return "unit";
}

WeightSpec::Kind parse_weight_kind(int line, const std::string& value) {
  if (value == "unit") return WeightSpec::Kind::Unit;
  if (value == "power_of_t") return WeightSpec::Kind::PowerOfT;
  if (value == "spatial_profile") return WeightSpec::Kind::SpatialProfile;
  fail(line, "morawetz_weight must be unit, power_of_t or spatial_profile, got '" + value + "'");
}

InitialFamily parse_initial_family(int line, const std::string& value) {
  if (value == "gaussian") return InitialFamily::Gaussian;
  if (value == "bubble") return InitialFamily::Bubble;
  if (value == "zero") return InitialFamily::Zero;
  fail(line, "family must be gaussian, bubble or zero, got '" + value + "'");
}

bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

void parse_analysis_list(int line, const std::string& value, AnalysisSet& set) {
  std::string token;
  auto flush = [&]() {
    if (token.empty()) return;
    if (token == "virial") set.virial = true;
    else if (token == "pseudoconformal") set.pseudoconformal = true;
    else if (token == "morawetz") set.morawetz = true;
    else if (token == "spacetime") set.spacetime = true;
    else if (token == "decay") set.decay = true;
    else if (token == "criteria") set.criteria = true;
    else fail(line, "unknown analysis '" + token + "'");
    token.clear();
  };
  for (char c : value) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) flush();
    else token += c;
  }
  flush();
}

}  // namespace

const char* initial_family_name(InitialFamily family) {
  switch (family) {
    case InitialFamily::Gaussian: return "gaussian";
    case InitialFamily::Bubble: return "bubble";
    case InitialFamily::Zero: return "zero";
  }
  return "gaussian";
}

NonlinearityModel Scenario::make_model() const {
  return NonlinearityModel(dimension, h, f1, f2, coupling, sign);
}

std::shared_ptr<const RadialGrid> Scenario::make_grid() const {
  return std::make_shared<const RadialGrid>(dimension, grid.r_max, grid.nodes);
}

RadialField Scenario::make_initial(const std::shared_ptr<const RadialGrid>& grid_ptr) const {
  switch (initial.family) {
    case InitialFamily::Gaussian:
      return make_gaussian(grid_ptr, initial.amplitude, initial.width, initial.chirp);
    case InitialFamily::Bubble:
      return make_bubble(grid_ptr, initial.amplitude, initial.width, initial.chirp);
    case InitialFamily::Zero:
      return make_zero(grid_ptr);
  }
  return make_zero(grid_ptr);
}

std::string Scenario::to_config_text() const {
  std::string out;
  out += "id = " + id + "\n\n";

  out += "[model]\n";
  out += "dimension = " + std::to_string(dimension) + "\n";
  out += "h = " + h.describe() + "\n";
  out += "f1 = " + f1.describe() + "\n";
  out += "f2 = " + f2.describe() + "\n";
  out += "A = " + format_double(coupling) + "\n";
  out += "sign = " + sign_name(sign) + "\n\n";

  out += "[grid]\n";
  out += "r_max = " + format_double(grid.r_max) + "\n";
  out += "nodes = " + std::to_string(grid.nodes) + "\n\n";

  out += "[initial]\n";
  out += std::string("family = ") + initial_family_name(initial.family) + "\n";
  out += "amplitude = " + format_double(initial.amplitude) + "\n";
  out += "width = " + format_double(initial.width) + "\n";
  out += "chirp = " + format_double(initial.chirp) + "\n\n";

  out += "[solver]\n";
  out += "dt = " + format_double(solver.dt) + "\n";
  out += "dt_min = " + format_double(solver.dt_min) + "\n";
  out += "t_end = " + format_double(solver.t_end) + "\n";
  out += "picard_tol = " + format_double(solver.picard_tol) + "\n";
  out += "picard_max_iters = " + std::to_string(solver.picard_max_iters) + "\n";
  out += "blowup_factor = " + format_double(solver.blowup_factor) + "\n";
  out += "output_stride = " + std::to_string(solver.output_stride) + "\n\n";

  out += "[analyses]\n";
  std::string list;
  auto add = [&list](bool flag, const char* name) {
    if (!flag) return;
    if (!list.empty()) list += ", ";
    list += name;
  };
  add(analyses.virial, "virial");
  add(analyses.pseudoconformal, "pseudoconformal");
  add(analyses.morawetz, "morawetz");
  add(analyses.spacetime, "spacetime");
  add(analyses.decay, "decay");
  add(analyses.criteria, "criteria");
  out += "analyses = " + list + "\n";
  out += std::string("morawetz_weight = ") + weight_kind_name(analyses.morawetz_weight) + "\n";
  out += "morawetz_theta = " + format_double(analyses.morawetz_theta) + "\n";
  out += "morawetz_mu = " + format_double(analyses.morawetz_mu) + "\n";
  out += "morawetz_sigma = " + format_double(analyses.morawetz_sigma) + "\n";
  if (std::isfinite(analyses.spacetime_p)) {
    out += "spacetime_p = " + format_double(analyses.spacetime_p) + "\n";
    out += "spacetime_q = " + format_double(analyses.spacetime_q) + "\n";
    out += "spacetime_r = " + format_double(analyses.spacetime_r) + "\n";
  }
  out += "decay_t_min = " + format_double(analyses.decay_t_min) + "\n";
  return out;
}

Scenario parse_scenario_text(const std::string& text) {
  Scenario sc;
  enum class Section { None, Model, Grid, Initial, Solver, Analyses };
  Section section = Section::None;
  bool model_dim_set = false;
  bool grid_dim_set = false;
  int model_dim = 3;
  int grid_dim = 3;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "model") section = Section::Model;
      else if (name == "grid") section = Section::Grid;
      else if (name == "initial") section = Section::Initial;
      else if (name == "solver") section = Section::Solver;
      else if (name == "analyses") section = Section::Analyses;
      else fail(line_no, "unknown section '[" + name + "]'");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "missing key before '='");

    try {
      switch (section) {
        case Section::None:
          if (key == "id") {
            if (!valid_id(value))
              fail(line_no, "id must be nonempty and use only letters, digits, '_', '-', '.'");
            sc.id = value;
          } else {
            fail(line_no, "key '" + key + "' appears before any section (only 'id' may)");
          }
          break;
        case Section::Model:
          if (key == "dimension") { model_dim = parse_int(line_no, key, value); model_dim_set = true; }
          else if (key == "h") sc.h = ScalarFamily::parse(value);
          else if (key == "f1") sc.f1 = ScalarFamily::parse(value);
          else if (key == "f2") sc.f2 = ScalarFamily::parse(value);
          else if (key == "A") sc.coupling = parse_double(line_no, key, value);
          else if (key == "sign") sc.sign = parse_sign(value);
          else fail(line_no, "unknown key '" + key + "' in [model]");
          break;
        case Section::Grid:
          if (key == "dimension") { grid_dim = parse_int(line_no, key, value); grid_dim_set = true; }
          else if (key == "r_max") sc.grid.r_max = parse_double(line_no, key, value);
          else if (key == "nodes") sc.grid.nodes = parse_int(line_no, key, value);
          else fail(line_no, "unknown key '" + key + "' in [grid]");
          break;
        case Section::Initial:
          if (key == "family") sc.initial.family = parse_initial_family(line_no, value);
          else if (key == "amplitude") sc.initial.amplitude = parse_double(line_no, key, value);
          else if (key == "width") sc.initial.width = parse_double(line_no, key, value);
          else if (key == "chirp") sc.initial.chirp = parse_double(line_no, key, value);
          else fail(line_no, "unknown key '" + key + "' in [initial]");
          break;
        case Section::Solver:
          if (key == "dt") sc.solver.dt = parse_double(line_no, key, value);
          else if (key == "dt_min") sc.solver.dt_min = parse_double(line_no, key, value);
          else if (key == "t_end") sc.solver.t_end = parse_double(line_no, key, value);
          else if (key == "picard_tol") sc.solver.picard_tol = parse_double(line_no, key, value);
          else if (key == "picard_max_iters") sc.solver.picard_max_iters = parse_int(line_no, key, value);
          else if (key == "blowup_factor") sc.solver.blowup_factor = parse_double(line_no, key, value);
          else if (key == "output_stride") sc.solver.output_stride = parse_int(line_no, key, value);
          else fail(line_no, "unknown key '" + key + "' in [solver]");
          break;
        case Section::Analyses:
          if (key == "analyses") parse_analysis_list(line_no, value, sc.analyses);
          else if (key == "morawetz_weight") sc.analyses.morawetz_weight = parse_weight_kind(line_no, value);
          else if (key == "morawetz_theta") sc.analyses.morawetz_theta = parse_double(line_no, key, value);
          else if (key == "morawetz_mu") sc.analyses.morawetz_mu = parse_double(line_no, key, value);
          else if (key == "morawetz_sigma") sc.analyses.morawetz_sigma = parse_double(line_no, key, value);
          else if (key == "spacetime_p") sc.analyses.spacetime_p = parse_double(line_no, key, value);
          else if (key == "spacetime_q") sc.analyses.spacetime_q = parse_double(line_no, key, value);
          else if (key == "spacetime_r") sc.analyses.spacetime_r = parse_double(line_no, key, value);
          else if (key == "decay_t_min") sc.analyses.decay_t_min = parse_double(line_no, key, value);
          else fail(line_no, "unknown key '" + key + "' in [analyses]");
          break;
      }
    } catch (const std::invalid_argument& error) {
      std::string what = error.what();
      if (what.rfind("config line", 0) == 0) throw;
      fail(line_no, what);
    }
  }

  if (model_dim_set && grid_dim_set && model_dim != grid_dim)
    throw std::invalid_argument("dimension disagrees between [model] (" +
                                std::to_string(model_dim) + ") and [grid] (" +
                                std::to_string(grid_dim) + ")");
  sc.dimension = model_dim_set ? model_dim : grid_dim;
  sc.grid.dimension = sc.dimension;

  // Structural validation: the model/grid constructors and the solver carry
  // the detailed checks.
  (void)sc.make_model();
  sc.solver.validate();
  if (!(sc.grid.r_max > 0.0) || !std::isfinite(sc.grid.r_max))
    throw std::invalid_argument("r_max must be positive and finite");
  if (sc.grid.nodes < 16) throw std::invalid_argument("nodes must be at least 16");
  if (sc.initial.family != InitialFamily::Zero) {
    if (!std::isfinite(sc.initial.amplitude))
      throw std::invalid_argument("initial amplitude must be finite");
    if (!(sc.initial.width > 0.0) || !std::isfinite(sc.initial.width))
      throw std::invalid_argument("initial width must be positive and finite");
    if (!std::isfinite(sc.initial.chirp))
      throw std::invalid_argument("initial chirp must be finite");
  }
  if (sc.sign == CriticalSign::Focusing && sc.analyses.pseudoconformal)
    throw std::invalid_argument(
        "pseudoconformal conservation check requires defocusing or absent coupling");
  if (sc.analyses.spacetime &&
      !(std::isfinite(sc.analyses.spacetime_p) && std::isfinite(sc.analyses.spacetime_q) &&
        std::isfinite(sc.analyses.spacetime_r)))
    throw std::invalid_argument(
        "spacetime analysis requires spacetime_p, spacetime_q and spacetime_r");
  if (sc.analyses.decay && !(sc.analyses.decay_t_min >= 1.0))
    throw std::invalid_argument("decay_t_min must be at least 1");
  if (!(sc.analyses.morawetz_theta > 0.5 && sc.analyses.morawetz_theta < 1.0))
    throw std::invalid_argument("morawetz_theta must lie in (1/2, 1)");
  if (!(sc.analyses.morawetz_mu > 1.0 && sc.analyses.morawetz_mu < 3.0))
    throw std::invalid_argument("morawetz_mu must lie in (1, 3)");
  if (!(sc.analyses.morawetz_sigma / (1.0 - sc.analyses.morawetz_theta) > sc.dimension))
    throw std::invalid_argument(
        "morawetz_sigma too small: sigma/(1 - morawetz_theta) must exceed the dimension");
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario_text(buffer.str());
  } catch (const std::invalid_argument& error) {
    throw std::invalid_argument(path + ": " + error.what());
  }
}

}  // namespace qnls
