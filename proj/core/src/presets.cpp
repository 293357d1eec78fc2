#include "qnls/presets.hpp"

namespace qnls {
namespace {

ScalarFamily power1(double coeff, double exponent) {
  return ScalarFamily::power_sum({{coeff, exponent}});
}

ScalarFamily power2(double c1, double e1, double c2, double e2) {
  return ScalarFamily::power_sum({{c1, e1}, {c2, e2}});
}

Scenario base_scenario(std::string id) {
  Scenario sc;
  sc.id = std::move(id);
  sc.dimension = 3;
  sc.grid = GridSpec{3, 40.0, 4096};
  sc.initial = InitialSpec{InitialFamily::Gaussian, 0.8, 1.0, 0.0};
  // SolverConfig defaults already carry dt=1e-3, dt_min=1e-9, tol=1e-10.
  return sc;
}

std::vector<Scenario> make_presets() {
  std::vector<Scenario> out;

  {
    // Linear h with a linear source, defocusing coupling.
    Scenario sc = base_scenario("ex31A");
    sc.h = power1(1.0, 1.0);
    sc.f1 = power1(1.0, 1.0);
    sc.f2 = ScalarFamily::zero();
    sc.coupling = 1.0;
    sc.sign = CriticalSign::Defocusing;
    sc.solver.t_end = 10.0;
    sc.analyses.virial = true;
    sc.analyses.criteria = true;
    out.push_back(sc);
  }
  {
    // Linear h, no source, focusing coupling with a positive-momentum chirp:
    // the finite-time collapse scenario.
    Scenario sc = base_scenario("ex31B");
    sc.h = power1(1.0, 1.0);
    sc.f1 = ScalarFamily::zero();
    sc.f2 = ScalarFamily::zero();
    sc.coupling = 2.0;
    sc.sign = CriticalSign::Focusing;
    sc.initial = InitialSpec{InitialFamily::Gaussian, 2.0, 1.0, 0.5};
    sc.solver.t_end = 5.0;
    // Two decades of gradient growth is already far beyond what the grid can
    // resolve faithfully; detect there instead of riding the collapse into
    // step-size exhaustion.
    sc.solver.blowup_factor = 100.0;
    sc.analyses.criteria = true;
    out.push_back(sc);
  }
  {
    // Mixed square-root/linear h with competing sources.
    Scenario sc = base_scenario("ex32");
    sc.h = power2(1.0, 0.5, 0.5, 1.0);
    sc.f1 = power1(1.0, 1.0);
    sc.f2 = power1(0.5, 0.5);
    sc.coupling = 1.0;
    sc.sign = CriticalSign::Defocusing;
    sc.solver.t_end = 5.0;
    sc.analyses.virial = true;
    out.push_back(sc);
  }
  {
    // Exponential h against an exponential source.
    Scenario sc = base_scenario("ex33");
    sc.h = ScalarFamily::exponential(1.0, 1.0);
    sc.f1 = ScalarFamily::exponential(0.5, 2.0);
    sc.f2 = ScalarFamily::zero();
    sc.coupling = 2.0;
    sc.sign = CriticalSign::Defocusing;
    sc.initial = InitialSpec{InitialFamily::Gaussian, 0.5, 1.0, 0.0};
    sc.solver.t_end = 10.0;
    sc.analyses.virial = true;
    sc.analyses.criteria = true;
    out.push_back(sc);
  }
  {
    // Square-root h with the mass-critical source exponent 2/N.
    Scenario sc = base_scenario("ex41");
    sc.h = power1(1.0, 0.5);
    sc.f1 = power1(1.0, 2.0 / 3.0);
    sc.f2 = power1(1.0, 1.0);
    sc.coupling = 1.0;
    sc.sign = CriticalSign::Defocusing;
    sc.initial = InitialSpec{InitialFamily::Gaussian, 0.8, 1.5, 0.0};
    sc.solver.t_end = 5.0;
    sc.analyses.virial = true;
    sc.analyses.pseudoconformal = true;
    sc.analyses.criteria = true;
    out.push_back(sc);
  }
  {
    // Two-branch h and source spanning sub- to super-critical exponents.
    Scenario sc = base_scenario("ex42");
    sc.h = power2(1.0, 0.5, 1.0, 1.0);
    sc.f1 = power2(1.0, 2.0 / 3.0, 1.0, 5.0 / 3.0);
    sc.f2 = ScalarFamily::zero();
    sc.coupling = 1.0;
    sc.sign = CriticalSign::Defocusing;
    sc.solver.t_end = 5.0;
    sc.analyses.criteria = true;
    out.push_back(sc);
  }
  {
    // Pure defocusing absorber: the clean decay scenario on a wide box.
    Scenario sc = base_scenario("ex51");
    sc.h = power1(1.0, 1.0);
    sc.f1 = ScalarFamily::zero();
    sc.f2 = power1(1.0, 1.0);
    sc.coupling = 1.0;
    sc.sign = CriticalSign::Defocusing;
    sc.grid = GridSpec{3, 100.0, 10240};
    sc.initial = InitialSpec{InitialFamily::Gaussian, 1.0, 1.0, 0.0};
    sc.solver.t_end = 20.0;
    sc.analyses.morawetz = true;
    sc.analyses.morawetz_weight = WeightSpec::Kind::Unit;
    sc.analyses.decay = true;
    sc.analyses.decay_t_min = 1.0;
    sc.analyses.criteria = true;
    out.push_back(sc);
  }
  {
    // Square-root h with the matched source exponent: the space-time norm
    // scenario.
    Scenario sc = base_scenario("ex52");
    sc.h = power1(1.0, 0.5);
    sc.f1 = power1(1.0, 2.0 / 3.0);
    sc.f2 = ScalarFamily::zero();
    sc.coupling = 1.0;
    sc.sign = CriticalSign::Defocusing;
    sc.grid = GridSpec{3, 100.0, 10240};
    sc.initial = InitialSpec{InitialFamily::Gaussian, 1.0, 1.0, 0.0};
    sc.solver.t_end = 20.0;
    sc.analyses.spacetime = true;
    sc.analyses.spacetime_p = 1.0;
    sc.analyses.spacetime_q = 1.0;
    sc.analyses.spacetime_r = 1.5;
    sc.analyses.criteria = true;
    out.push_back(sc);
  }
  {
    // Two-branch h and source with an extra absorber.
    Scenario sc = base_scenario("ex53");
    sc.h = power2(1.0, 0.5, 1.0, 1.0);
    sc.f1 = power2(1.0, 2.0 / 3.0, 1.0, 5.0 / 3.0);
    sc.f2 = power1(0.5, 1.0);
    sc.coupling = 1.0;
    sc.sign = CriticalSign::Defocusing;
    sc.solver.t_end = 5.0;
    sc.analyses.criteria = true;
    out.push_back(sc);
  }
  {
    // Zero potential: the exactly solvable reference whose conservation
    // defects measure pure discretization error.
    Scenario sc = base_scenario("free");
    sc.h = ScalarFamily::zero();
    sc.f1 = ScalarFamily::zero();
    sc.f2 = ScalarFamily::zero();
    sc.coupling = 0.0;
    sc.sign = CriticalSign::Absent;
    sc.grid = GridSpec{3, 40.0, 8192};
    sc.initial = InitialSpec{InitialFamily::Gaussian, 1.0, 6.0, 0.0};
    sc.solver.t_end = 2.0;
    sc.analyses.virial = true;
    sc.analyses.pseudoconformal = true;
    out.push_back(sc);
  }
  return out;
}

}  // namespace

const std::vector<Scenario>& builtin_presets() {
  static const std::vector<Scenario> presets = make_presets();
  return presets;
}

std::optional<Scenario> find_preset(const std::string& id) {
  for (const Scenario& sc : builtin_presets())
    if (sc.id == id) return sc;
  return std::nullopt;
}

}  // namespace qnls
