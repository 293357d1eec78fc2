#include "qnls/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qnls/diagnostics.hpp"

namespace qnls {
namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

MorawetzParams params_from(const Scenario& sc) {
  MorawetzParams params;
  params.theta = sc.analyses.morawetz_theta;
  params.mu = sc.analyses.morawetz_mu;
  params.sigma = sc.analyses.morawetz_sigma;
  params.p = sc.analyses.spacetime_p;
  params.q = sc.analyses.spacetime_q;
  params.r = sc.analyses.spacetime_r;
  return params;
}

JsonValue finding_to_json(const ConditionFinding& finding) {
  JsonValue out = JsonValue::object();
  out.add("holds", JsonValue::boolean(finding.holds));
  out.add("verdict", JsonValue::string(verdict_name(finding.verdict)));
  out.add("witness", JsonValue::number(finding.witness));
  return out;
}

void append_csv_value(std::string& line, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  line += buf;
}

void write_series_csv(const std::string& path, const std::vector<DiagnosticsRecord>& series,
                      const std::vector<double>& residual) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "t,mass,energy,J,y,grad_u_sq,grad_h_sq,g1_int,g2_int,hcrit_int,psi_int,theta,P,"
         "residual\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const DiagnosticsRecord& rec = series[i];
    std::string line;
    const double columns[] = {rec.t,          rec.mass,    rec.energy,  rec.variance,
                              rec.momentum,   rec.grad_u_sq, rec.grad_h_sq, rec.g1_int,
                              rec.g2_int,     rec.hcrit_int, rec.psi_int,  rec.theta,
                              rec.pseudo_P,   residual[i]};
    for (std::size_t c = 0; c < std::size(columns); ++c) {
      if (c > 0) line += ',';
      append_csv_value(line, columns[c]);
    }
    line += '\n';
    out << line;
  }
}

/// Picks the closed-form right side matching the weight kind and the sign
/// classification; NaN when the classified case offers none.
double morawetz_rhs(const CriteriaReport& criteria, WeightSpec::Kind kind) {
  const MorawetzConstants& mc = criteria.morawetz;
  switch (criteria.classification.decay_case) {
    case DecayCase::Case1:
      switch (kind) {
        case WeightSpec::Kind::Unit: return mc.M3;
        case WeightSpec::Kind::PowerOfT: return mc.M2;
        case WeightSpec::Kind::SpatialProfile: return mc.M1;
      }
      break;
    case DecayCase::Case2:
      switch (kind) {
        case WeightSpec::Kind::Unit: return mc.M5;
        case WeightSpec::Kind::PowerOfT: return mc.M4;
        case WeightSpec::Kind::SpatialProfile: return kNaN;
      }
      break;
    case DecayCase::Neither: break;
  }
  return kNaN;
}

}  // namespace

CriteriaReport check_scenario(const Scenario& sc) {
  NonlinearityModel model = sc.make_model();
  auto grid = sc.make_grid();
  RadialField u0 = sc.make_initial(grid);
  DiagnosticsRecord d0 = diagnose(u0, model, 0.0);
  return evaluate_criteria(model, d0, u0, params_from(sc));
}

JsonValue criteria_to_json(const CriteriaReport& report) {
  JsonValue out = JsonValue::object();
  out.add("dimension", JsonValue::integer(report.dimension));
  out.add("sign", JsonValue::string(sign_name(report.sign)));
  out.add("sobolev_cs", JsonValue::number(report.sobolev_cs));

  if (report.sign == CriticalSign::Focusing) {
    const BlowupReport& b = report.blowup;
    JsonValue blowup = JsonValue::object();
    blowup.add("feasible_k", JsonValue::boolean(b.feasible_k));
    blowup.add("k", JsonValue::number(b.k));
    blowup.add("case_c", JsonValue::boolean(b.case_c));
    blowup.add("case_d", JsonValue::boolean(b.case_d));
    blowup.add("m_tilde_1", JsonValue::number(b.m_tilde_1));
    blowup.add("m_tilde_2", JsonValue::number(b.m_tilde_2));
    blowup.add("sign_combo", JsonValue::number(b.sign_combo));
    blowup.add("y0", JsonValue::number(b.y0));
    blowup.add("applicable", JsonValue::boolean(b.applicable));
    blowup.add("time_bound", JsonValue::number(b.time_bound));
    out.add("blowup", blowup);
  } else {
    JsonValue existence = JsonValue::object();
    existence.add("case_a", finding_to_json(report.existence.case_a));
    existence.add("case_b", finding_to_json(report.existence.case_b));
    out.add("existence", existence);

    const GammaSet& gs = report.gamma_set;
    JsonValue gamma = JsonValue::object();
    gamma.add("trivial", JsonValue::boolean(gs.trivial));
    gamma.add("available", JsonValue::boolean(gs.available));
    gamma.add("gamma1", JsonValue::number(gs.gamma1));
    gamma.add("gamma2", JsonValue::number(gs.gamma2));
    gamma.add("gamma1_tilde", JsonValue::number(gs.gamma1_t));
    gamma.add("gamma2_tilde", JsonValue::number(gs.gamma2_t));
    gamma.add("m1", JsonValue::number(gs.m1));
    gamma.add("m1_prime", JsonValue::number(gs.m1p));
    gamma.add("m2", JsonValue::number(gs.m2));
    gamma.add("m2_prime", JsonValue::number(gs.m2p));
    out.add("gamma", gamma);
    out.add("mr", JsonValue::number(report.mr));
  }

  const CaseReport& cls = report.classification;
  JsonValue classification = JsonValue::object();
  classification.add("case", JsonValue::string(decay_case_name(cls.decay_case)));
  classification.add("sign_x1", JsonValue::boolean(cls.sign_x1));
  classification.add("sign_x2", JsonValue::boolean(cls.sign_x2));
  classification.add("sign_x3", JsonValue::boolean(cls.sign_x3));
  classification.add("sign_x4", JsonValue::boolean(cls.sign_x4));
  classification.add("k1", JsonValue::number(cls.k1));
  classification.add("k2", JsonValue::number(cls.k2));
  classification.add("k3", JsonValue::number(cls.k3));
  classification.add("k4", JsonValue::number(cls.k4));
  classification.add("l", JsonValue::number(cls.l_value));
  out.add("classification", classification);

  const MorawetzConstants& mc = report.morawetz;
  JsonValue morawetz = JsonValue::object();
  morawetz.add("M1", JsonValue::number(mc.M1));
  morawetz.add("M2", JsonValue::number(mc.M2));
  morawetz.add("M3", JsonValue::number(mc.M3));
  morawetz.add("M4", JsonValue::number(mc.M4));
  morawetz.add("M5", JsonValue::number(mc.M5));
  morawetz.add("C1", JsonValue::number(mc.C1));
  morawetz.add("C2", JsonValue::number(mc.C2));
  morawetz.add("C3", JsonValue::number(mc.C3));
  morawetz.add("C_u0", JsonValue::number(mc.C_u0));
  out.add("morawetz", morawetz);

  const HolderExponents& he = report.holder;
  JsonValue holder = JsonValue::object();
  holder.add("tau1_tilde", JsonValue::number(he.tau1_tilde));
  holder.add("tau1_tilde_prime", JsonValue::number(he.tau1_tilde_prime));
  holder.add("tau2_tilde", JsonValue::number(he.tau2_tilde));
  holder.add("tau2_tilde_prime", JsonValue::number(he.tau2_tilde_prime));
  holder.add("tau3", JsonValue::number(he.tau3));
  holder.add("tau4", JsonValue::number(he.tau4));
  holder.add("tau3_tilde", JsonValue::number(he.tau3_tilde));
  holder.add("tau4_tilde", JsonValue::number(he.tau4_tilde));
  out.add("holder", holder);

  out.add("h_bound", JsonValue::number(report.h_bound));
  out.add("i_bound", JsonValue::number(report.i_bound));
  out.add("spacetime_note", JsonValue::string(report.spacetime_note));
  return out;
}

RunReport run_scenario(const Scenario& sc, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  RunReport report;
  report.scenario_id = sc.id;

  NonlinearityModel model = sc.make_model();
  auto grid = sc.make_grid();
  RadialField u0 = sc.make_initial(grid);
  DiagnosticsRecord d0 = diagnose(u0, model, 0.0);
  report.criteria = evaluate_criteria(model, d0, u0, params_from(sc));

  RunOutcome outcome = run(u0, model, sc.solver);
  report.status = outcome.status;
  const std::vector<DiagnosticsRecord>& series = outcome.series;

  const double mass0 = series.front().mass;
  const double energy0 = series.front().energy;
  const double mass_scale = std::max(std::abs(mass0), 1e-30);
  const double energy_scale = std::max(std::abs(energy0), 1e-30);
  for (const DiagnosticsRecord& rec : series) {
    report.drift_mass = std::max(report.drift_mass, std::abs(rec.mass - mass0) / mass_scale);
    report.drift_energy =
        std::max(report.drift_energy, std::abs(rec.energy - energy0) / energy_scale);
    report.wall_ratio_max = std::max(report.wall_ratio_max, rec.wall_ratio);
  }

  std::vector<double> residual(series.size(), 0.0);
  if (sc.sign != CriticalSign::Focusing) residual = pseudoconformal_residual(series);

  if (sc.analyses.virial) {
    IdentityReport ir = verify_virial(series, 1e-3);
    double lhs = std::max(ir.variance_defect / std::max(ir.variance_scale, 1e-30),
                          ir.momentum_defect / std::max(ir.momentum_scale, 1e-30));
    report.bounds.push_back({"virial_identity", lhs, ir.tolerance, ir.pass});
  }
  if (sc.analyses.pseudoconformal) {
    double scale = std::max(std::abs(series.front().pseudo_P), 1e-30);
    double worst = 0.0;
    for (double r : residual) worst = std::max(worst, std::abs(r));
    double lhs = worst / scale;
    report.bounds.push_back({"pseudoconformal_residual", lhs, 1e-3, lhs <= 1e-3});
  }
  if (sc.analyses.morawetz) {
    WeightSpec weight;
    switch (sc.analyses.morawetz_weight) {
      case WeightSpec::Kind::Unit: weight = WeightSpec::unit(); break;
      case WeightSpec::Kind::PowerOfT:
        weight = WeightSpec::power_of_t(sc.analyses.morawetz_mu);
        break;
      case WeightSpec::Kind::SpatialProfile:
        weight = WeightSpec::spatial_profile(sc.analyses.morawetz_sigma, sc.analyses.morawetz_theta);
        break;
    }
    double lhs = weight.kind == WeightSpec::Kind::SpatialProfile
                     ? morawetz_accumulate(outcome.checkpoint_times, outcome.checkpoint_fields,
                                           model, weight)
                     : morawetz_accumulate(series, weight);
    double rhs = morawetz_rhs(report.criteria, weight.kind);
    if (std::isfinite(rhs)) {
      std::string name = std::string("morawetz_") +
                         (weight.kind == WeightSpec::Kind::Unit          ? "unit"
                          : weight.kind == WeightSpec::Kind::PowerOfT    ? "power_of_t"
                                                                         : "spatial_profile");
      report.bounds.push_back({name, lhs, rhs, lhs <= rhs});
    }
  }
  if (sc.analyses.decay) {
    const MorawetzConstants& mc = report.criteria.morawetz;
    if (std::isfinite(mc.C1)) {
      double loss = 0.0;
      double slow_coeff = 0.0;
      if (report.criteria.classification.decay_case == DecayCase::Case2) {
        loss = report.criteria.classification.l_value * (1.0 + report.criteria.mr) /
               (1.0 - report.criteria.mr);
        slow_coeff = mc.C2;
      }
      DecayCheck dc = check_pointwise_decay(series, mc.C1, slow_coeff, loss);
      if (dc.checked > 0)
        report.bounds.push_back({"pointwise_decay", dc.worst_ratio, 1.0, dc.violations == 0});
    }
    try {
      double slope = decay_fit(series, sc.analyses.decay_t_min);
      report.bounds.push_back({"decay_slope", slope, kNaN, true});
    } catch (const std::invalid_argument&) {
      // too few usable records for a fit; informational row dropped
    }
  }
  if (sc.analyses.spacetime && std::isfinite(report.criteria.h_bound)) {
    auto [h_lhs, g1_q] = spacetime_norms(series, sc.analyses.spacetime_p, sc.analyses.spacetime_q,
                                         1.0);
    (void)g1_q;
    report.bounds.push_back(
        {"spacetime_H", h_lhs, report.criteria.h_bound, h_lhs <= report.criteria.h_bound});
    if (std::isfinite(report.criteria.i_bound)) {
      auto [h_again, i_lhs] =
          spacetime_norms(series, outcome.checkpoint_times, outcome.checkpoint_fields, model,
                          sc.analyses.spacetime_p, sc.analyses.spacetime_q,
                          sc.analyses.spacetime_r);
      (void)h_again;
      report.bounds.push_back(
          {"spacetime_I", i_lhs, report.criteria.i_bound, i_lhs <= report.criteria.i_bound});
    }
  }
  if (sc.sign == CriticalSign::Focusing && report.criteria.blowup.applicable) {
    // Collapse must happen, and no later than the momentum bound (with 10%
    // discretization headroom on the detection time).
    double bound = report.criteria.blowup.time_bound;
    double lhs = outcome.status == RunStatus::BlowupDetected ? outcome.t_star : outcome.t_final;
    bool ok = outcome.status == RunStatus::BlowupDetected && lhs <= 1.1 * bound;
    report.bounds.push_back({"blowup_time", lhs, bound, ok});
  }

  write_series_csv((fs::path(out_dir) / (sc.id + ".series.csv")).string(), series, residual);

  JsonValue summary = JsonValue::object();
  summary.add("scenario_id", JsonValue::string(sc.id));
  summary.add("status", JsonValue::string(status_name(outcome.status)));
  summary.add("criteria",
              sc.analyses.criteria ? criteria_to_json(report.criteria) : JsonValue::object());
  JsonValue bounds = JsonValue::array();
  for (const BoundRow& row : report.bounds) {
    JsonValue item = JsonValue::object();
    item.add("name", JsonValue::string(row.name));
    item.add("computed_lhs", JsonValue::number(row.computed_lhs));
    item.add("paper_rhs", JsonValue::number(row.paper_rhs));
    item.add("satisfied", JsonValue::boolean(row.satisfied));
    bounds.push(std::move(item));
  }
  summary.add("bounds", std::move(bounds));
  JsonValue drift = JsonValue::object();
  drift.add("mass", JsonValue::number(report.drift_mass));
  drift.add("energy", JsonValue::number(report.drift_energy));
  drift.add("wall_ratio_max", JsonValue::number(report.wall_ratio_max));
  summary.add("drift", std::move(drift));
  JsonValue timings = JsonValue::object();
  timings.add("steps_accepted", JsonValue::integer(outcome.steps_accepted));
  timings.add("steps_rejected", JsonValue::integer(outcome.steps_rejected));
  timings.add("picard_iterations", JsonValue::integer(outcome.picard_total));
  timings.add("dt_halvings", JsonValue::integer(outcome.dt_halvings));
  timings.add("dt_final", JsonValue::number(outcome.dt_final));
  timings.add("series_records", JsonValue::integer(static_cast<long long>(series.size())));
  timings.add("checkpoints",
              JsonValue::integer(static_cast<long long>(outcome.checkpoint_times.size())));
  summary.add("timings", std::move(timings));

  {
    std::ofstream out((fs::path(out_dir) / (sc.id + ".summary.json")).string(),
                      std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary for '" + sc.id + "'");
    out << summary.dump();
  }

  bool all_ok = outcome.status != RunStatus::IterationFailure;
  for (const BoundRow& row : report.bounds)
    if (!row.satisfied) all_ok = false;
  report.exit_ok = all_ok;
  report.outcome = std::move(outcome);
  return report;
}

int sweep_directory(const std::string& dir, int jobs) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: '" + dir + "'");

  std::vector<std::string> config_paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".cfg")
      config_paths.push_back(entry.path().string());
  std::sort(config_paths.begin(), config_paths.end());

  struct SweepRow {
    std::string config;
    std::string id;
    std::string status = "ParseError";
    bool ok = false;
    std::string error;
    bool runnable = false;
    Scenario scenario;
  };
  std::vector<SweepRow> rows(config_paths.size());
  std::vector<std::string> seen_ids;
  for (std::size_t i = 0; i < config_paths.size(); ++i) {
    rows[i].config = fs::path(config_paths[i]).filename().string();
    try {
      rows[i].scenario = load_scenario_file(config_paths[i]);
      rows[i].id = rows[i].scenario.id;
      if (std::find(seen_ids.begin(), seen_ids.end(), rows[i].id) != seen_ids.end()) {
        rows[i].error = "duplicate scenario id '" + rows[i].id + "'";
      } else {
        seen_ids.push_back(rows[i].id);
        rows[i].runnable = true;
      }
    } catch (const std::exception& error) {
      rows[i].error = error.what();
    }
  }

  int worker_count = std::max(1, jobs);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= rows.size()) return;
      SweepRow& row = rows[i];
      if (!row.runnable) continue;
      try {
        RunReport report = run_scenario(row.scenario, dir);
        row.status = status_name(report.status);
        row.ok = report.exit_ok;
      } catch (const std::exception& error) {
        row.status = "Error";
        row.error = error.what();
        row.ok = false;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  int failed = 0;
  JsonValue runs = JsonValue::array();
  for (const SweepRow& row : rows) {
    if (!row.ok) ++failed;
    JsonValue item = JsonValue::object();
    item.add("config_file", JsonValue::string(row.config));
    item.add("scenario_id", JsonValue::string(row.id));
    item.add("status", JsonValue::string(row.status));
    item.add("exit_ok", JsonValue::boolean(row.ok));
    if (!row.error.empty()) item.add("error", JsonValue::string(row.error));
    runs.push(std::move(item));
  }
  JsonValue index = JsonValue::object();
  index.add("total", JsonValue::integer(static_cast<long long>(rows.size())));
  index.add("failed", JsonValue::integer(failed));
  index.add("runs", std::move(runs));
  std::ofstream out((fs::path(dir) / "index.json").string(), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write index.json in '" + dir + "'");
  out << index.dump();
  return failed == 0 ? 0 : 1;
}

}  // namespace qnls
