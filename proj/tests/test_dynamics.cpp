#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include <qnls/dynamics.hpp>
#include <qnls/nonlinearity.hpp>
#include <qnls/radial_grid.hpp>

using qnls::Complex;
using qnls::CriticalSign;
using qnls::DiagnosticsRecord;
using qnls::NonlinearityModel;
using qnls::RadialGrid;
using qnls::RunOutcome;
using qnls::RunStatus;
using qnls::ScalarFamily;
using qnls::SolverConfig;

namespace {

NonlinearityModel cubic_model() {
  // h = s, F1 = s: a stand-in with every term of the equation active.
  return NonlinearityModel(3, ScalarFamily::parse("power:1*s^1"),
                           ScalarFamily::parse("power:1*s^1"), ScalarFamily::zero(), 1.0,
                           CriticalSign::Defocusing);
}

NonlinearityModel free_model() {
  return NonlinearityModel(3, ScalarFamily::zero(), ScalarFamily::zero(), ScalarFamily::zero(),
                           0.0, CriticalSign::Absent);
}

SolverConfig quick_config(double t_end, double dt = 1e-3) {
  SolverConfig config;
  config.dt = dt;
  config.t_end = t_end;
  config.picard_tol = 1e-12;
  config.output_stride = 5;
  return config;
}

}  // namespace

TEST_CASE("solver config validation names the offending key") {
  SolverConfig config;
  config.dt = -1.0;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("dt"), std::invalid_argument);
  config = SolverConfig{};
  config.picard_max_iters = 0;
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("picard_max_iters"),
                       std::invalid_argument);
}

TEST_CASE("mass is conserved to solver tolerance") {
  auto grid = std::make_shared<const RadialGrid>(3, 16.0, 1024);
  qnls::RadialField u0 = qnls::make_gaussian(grid, 0.8, 1.0, 0.0);
  RunOutcome out = qnls::run(u0, cubic_model(), quick_config(0.5));
  REQUIRE(out.status == RunStatus::Completed);
  double drift = 0.0;
  for (const DiagnosticsRecord& rec : out.series) {
    drift = std::max(drift, std::abs(rec.mass - out.series[0].mass));
  }
  CHECK(drift <= 1e-8 * out.series[0].mass);
}

TEST_CASE("free evolution reproduces the Gaussian variance law") {
  // For i u_t = Lap u with u0 = e^(-r^2/w^2): J(t) = J(0) (1 + 16 t^2 / w^4).
  auto grid = std::make_shared<const RadialGrid>(3, 24.0, 2048);
  const double w = 2.0;
  qnls::RadialField u0 = qnls::make_gaussian(grid, 1.0, w, 0.0);
  SolverConfig config = quick_config(0.5, 5e-4);
  RunOutcome out = qnls::run(u0, free_model(), config);
  REQUIRE(out.status == RunStatus::Completed);
  const double j0 = out.series[0].variance;
  for (const DiagnosticsRecord& rec : out.series) {
    const double expected = j0 * (1.0 + 16.0 * rec.t * rec.t / (w * w * w * w));
    CHECK(rec.variance == doctest::Approx(expected).epsilon(2e-5));
  }
}

TEST_CASE("stepping is time reversible") {
  auto grid = std::make_shared<const RadialGrid>(3, 12.0, 512);
  qnls::RadialField u0 = qnls::make_gaussian(grid, 0.7, 1.0, 0.2);
  qnls::RadialField u = u0;
  NonlinearityModel model = cubic_model();
  SolverConfig config = quick_config(1.0);
  config.picard_tol = 1e-13;
  const int steps = 50;
  for (int i = 0; i < steps; ++i) {
    qnls::StepStats stats = qnls::step(u, model, config.dt, config);
    REQUIRE(stats.converged);
  }
  // Conjugation reverses time for this equation; step forward again and
  // compare against the conjugate of the initial state.
  for (int j = 0; j < u.size(); ++j) u.values()[j] = std::conj(u.values()[j]);
  for (int i = 0; i < steps; ++i) {
    qnls::StepStats stats = qnls::step(u, model, config.dt, config);
    REQUIRE(stats.converged);
  }
  double worst = 0.0, scale = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    worst = std::max(worst, std::abs(u.values()[j] - std::conj(u0.values()[j])));
    scale = std::max(scale, std::abs(u0.values()[j]));
  }
  CHECK(worst <= 1e-8 * scale);
}

TEST_CASE("energy drift converges at second order in dt") {
  auto grid = std::make_shared<const RadialGrid>(3, 16.0, 768);
  qnls::RadialField u0 = qnls::make_gaussian(grid, 0.8, 1.0, 0.0);
  NonlinearityModel model = cubic_model();
  auto drift_at = [&](double dt) {
    SolverConfig config = quick_config(0.5, dt);
    config.picard_tol = 1e-13;
    RunOutcome out = qnls::run(u0, model, config);
    REQUIRE(out.status == RunStatus::Completed);
    double drift = 0.0;
    for (const DiagnosticsRecord& rec : out.series) {
      drift = std::max(drift, std::abs(rec.energy - out.series[0].energy));
    }
    return drift;
  };
  const double coarse = drift_at(2e-3);
  const double fine = drift_at(1e-3);
  CHECK(coarse / fine > 2.5);
  CHECK(coarse / fine < 6.0);
}

TEST_CASE("runs are deterministic") {
  auto grid = std::make_shared<const RadialGrid>(3, 12.0, 512);
  qnls::RadialField u0 = qnls::make_gaussian(grid, 0.8, 1.0, 0.1);
  NonlinearityModel model = cubic_model();
  RunOutcome a = qnls::run(u0, model, quick_config(0.2));
  RunOutcome b = qnls::run(u0, model, quick_config(0.2));
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    CHECK(a.series[i].mass == b.series[i].mass);
    CHECK(a.series[i].energy == b.series[i].energy);
    CHECK(a.series[i].momentum == b.series[i].momentum);
  }
  for (int j = 0; j < a.final_field.size(); ++j) {
    CHECK(a.final_field.values()[j] == b.final_field.values()[j]);
  }
}

TEST_CASE("focusing chirped data collapses and the variance shrinks") {
  auto grid = std::make_shared<const RadialGrid>(3, 12.0, 1024);
  qnls::RadialField u0 = qnls::make_gaussian(grid, 2.0, 1.0, 0.5);
  NonlinearityModel model(3, ScalarFamily::parse("power:1*s^1"), ScalarFamily::zero(),
                          ScalarFamily::zero(), 2.0, CriticalSign::Focusing);
  SolverConfig config;
  config.dt = 2e-4;
  config.t_end = 0.5;
  config.output_stride = 5;
  config.blowup_factor = 50.0;
  RunOutcome out = qnls::run(u0, model, config);
  CHECK(out.status == RunStatus::BlowupDetected);
  CHECK(out.t_star > 0.0);
  CHECK(out.t_star <= 0.25 * 1.05);  // J(0)/(4 y(0)) = 1/(8 b) = 0.25 for b = 0.5
  // y > 0 makes J strictly decreasing along the collapse.
  for (std::size_t i = 1; i < out.series.size(); ++i) {
    CHECK(out.series[i].variance < out.series[i - 1].variance);
  }
}

TEST_CASE("detect_blowup flags a synthetic gradient burst") {
  SolverConfig config;
  config.blowup_factor = 100.0;
  std::vector<DiagnosticsRecord> series(3);
  series[0].grad_u_sq = 1.0;
  series[1].grad_u_sq = 5.0;
  series[2].grad_u_sq = 50.0;
  CHECK_FALSE(qnls::detect_blowup(series, config));
  series[2].grad_u_sq = 99.0;
  series[2].grad_h_sq = 2.0;
  CHECK(qnls::detect_blowup(series, config));
}
