#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <qnls/diagnostics.hpp>
#include <qnls/nonlinearity.hpp>
#include <qnls/radial_grid.hpp>

using qnls::Complex;
using qnls::CriticalSign;
using qnls::DiagnosticsRecord;
using qnls::NonlinearityModel;
using qnls::RadialGrid;
using qnls::ScalarFamily;
using qnls::WeightSpec;

namespace {

constexpr double kPi = std::numbers::pi;

NonlinearityModel linear_model() {
  return NonlinearityModel(3, ScalarFamily::zero(), ScalarFamily::zero(), ScalarFamily::zero(),
                           0.0, CriticalSign::Absent);
}

NonlinearityModel h_model(ScalarFamily h) {
  return NonlinearityModel(3, std::move(h), ScalarFamily::zero(), ScalarFamily::zero(), 1.0,
                           CriticalSign::Defocusing);
}

}  // namespace

TEST_CASE("mass, variance and chirp momentum match closed forms") {
  auto grid = std::make_shared<const RadialGrid>(3, 16.0, 8192);
  const double a = 2.0, w = 1.0, b = 0.5;
  qnls::RadialField u = qnls::make_gaussian(grid, a, w, b);
  DiagnosticsRecord rec = qnls::diagnose(u, linear_model(), 0.0);

  const double mass = a * a * std::pow(kPi / 2.0, 1.5) * w * w * w;
  const double variance = a * a * (3.0 * w * w / 4.0) * std::pow(kPi / 2.0, 1.5) * w * w * w;
  CHECK(rec.mass == doctest::Approx(mass).epsilon(1e-7));
  CHECK(rec.variance == doctest::Approx(variance).epsilon(1e-6));
  // For u = f(r) e^(i b r^2): y = Im int conj(u) (x . grad u) = 2b int r^2 f^2.
  CHECK(rec.momentum == doctest::Approx(2.0 * b * variance).epsilon(1e-5));
}

TEST_CASE("theta vanishes identically for the linear equation") {
  auto grid = std::make_shared<const RadialGrid>(3, 12.0, 1024);
  qnls::RadialField u = qnls::make_gaussian(grid, 1.0, 1.5, 0.3);
  DiagnosticsRecord rec = qnls::diagnose(u, linear_model(), 0.0);
  CHECK(std::abs(rec.theta) <= 1e-12 * rec.grad_u_sq);
  CHECK(rec.pseudo_P == doctest::Approx(rec.variance).epsilon(1e-15));
}

TEST_CASE("quasilinear p-quadrature coincides with the h gradient") {
  auto grid = std::make_shared<const RadialGrid>(3, 12.0, 1024);
  qnls::RadialField u = qnls::make_gaussian(grid, 1.2, 1.0, 0.0);
  for (const char* family : {"power:1*s^0.5", "power:1*s^1"}) {
    DiagnosticsRecord rec = qnls::diagnose(u, h_model(ScalarFamily::parse(family)), 0.0);
    CHECK(rec.quasi_p_int == doctest::Approx(rec.grad_h_sq).epsilon(1e-12));
  }
}

TEST_CASE("diagnose rejects non-finite fields") {
  auto grid = std::make_shared<const RadialGrid>(3, 8.0, 64);
  qnls::RadialField u = qnls::make_gaussian(grid, 1.0, 1.0, 0.0);
  u.values()[10] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(qnls::diagnose(u, linear_model(), 0.0), std::domain_error);
}

TEST_CASE("virial checker accepts an exact synthetic series and flags a corrupted one") {
  // Synthetic solution of the two identities: J = cos(4t), y = sin(4t),
  // dy/dt = 4 cos(4t) carried entirely by the grad_u term of the right side.
  std::vector<DiagnosticsRecord> series;
  const double dt = 1e-3;
  for (int i = 0; i <= 400; ++i) {
    DiagnosticsRecord rec;
    rec.t = i * dt;
    rec.variance = std::cos(4.0 * rec.t);
    rec.momentum = std::sin(4.0 * rec.t);
    rec.grad_u_sq = -2.0 * std::cos(4.0 * rec.t);
    rec.dimension = 3;
    series.push_back(rec);
  }
  qnls::IdentityReport good = qnls::verify_virial(series, 1e-4);
  CHECK(good.pass);
  CHECK(good.variance_defect <= 1e-4 * good.variance_scale);

  series[200].momentum += 0.05;
  qnls::IdentityReport bad = qnls::verify_virial(series, 1e-4);
  CHECK_FALSE(bad.pass);

  std::vector<DiagnosticsRecord> jagged(series.begin(), series.begin() + 10);
  jagged[5].t += 0.2 * dt;
  CHECK_THROWS_AS(qnls::verify_virial(jagged, 1e-4), std::invalid_argument);
}

TEST_CASE("pseudoconformal residual is zero when theta carries the defect") {
  // With theta recorded, P(t) - P(0) - 4 int tau theta dtau must sit at the
  // trapezoid accuracy of the series; synthesize P from an arbitrary smooth
  // y and energy and let theta make the law exact.
  std::vector<DiagnosticsRecord> series;
  const double dt = 5e-4, e0 = 0.7;
  // J'(t) = -4 y(t) with y = t and J(0) = 1: J = 1 - 2 t^2.
  // P = J + 4 t y + 8 t^2 e0 = 1 + (2 + 8 e0) t^2, so 4 t theta = P' = 2(2+8e0)t,
  // i.e. theta = (1 + 4 e0)/1 * ... constant; the law closes exactly.
  for (int i = 0; i <= 1000; ++i) {
    DiagnosticsRecord rec;
    rec.t = i * dt;
    rec.momentum = rec.t;
    rec.variance = 1.0 - 2.0 * rec.t * rec.t;
    rec.energy = e0;
    rec.theta = 1.0 + 4.0 * e0;
    series.push_back(rec);
  }
  std::vector<double> residual = qnls::pseudoconformal_residual(series);
  for (double r : residual) CHECK(std::abs(r) <= 1e-10);

  series[3].crit_weight = -1.0;
  CHECK_THROWS_AS(qnls::pseudoconformal_residual(series), std::invalid_argument);
}

TEST_CASE("weighted accumulators integrate synthetic densities") {
  std::vector<DiagnosticsRecord> series;
  for (int i = 0; i <= 100; ++i) {
    DiagnosticsRecord rec;
    rec.t = 0.01 * i;
    rec.psi_int = 1.0;
    series.push_back(rec);
  }
  CHECK(qnls::morawetz_accumulate(series, WeightSpec::unit()) == doctest::Approx(1.0).epsilon(1e-12));
  // mu = 2 reduces to the unit weight.
  CHECK(qnls::morawetz_accumulate(series, WeightSpec::power_of_t(2.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // mu = 2.5: int_0^1 t^(-1/2) dt = 2, integrable singularity at t = 0.
  CHECK(qnls::morawetz_accumulate(series, WeightSpec::power_of_t(2.5)) ==
        doctest::Approx(2.0).epsilon(2e-3));
  CHECK_THROWS_AS(qnls::morawetz_accumulate(series, WeightSpec::spatial_profile(4.0, 0.75)),
                  std::invalid_argument);
}

TEST_CASE("spacetime norms from records") {
  std::vector<DiagnosticsRecord> series;
  for (int i = 0; i <= 300; ++i) {
    DiagnosticsRecord rec;
    rec.t = 0.01 * i;
    rec.psi_int = 2.0;
    rec.g1_abs_int = 5.0;
    series.push_back(rec);
  }
  auto [h_norm, g_norm] = qnls::spacetime_norms(series, 2.0, 1.0, 1.0);
  CHECK(h_norm == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-10));
  CHECK(g_norm == doctest::Approx(15.0).epsilon(1e-10));
  CHECK_THROWS_AS(qnls::spacetime_norms(series, 2.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("decay fit recovers a power slope") {
  std::vector<DiagnosticsRecord> series;
  for (int i = 0; i <= 1200; ++i) {
    DiagnosticsRecord rec;
    rec.t = 0.01 * i;
    rec.psi_int = rec.t > 0.0 ? 7.0 / (rec.t * rec.t) : 0.0;
    series.push_back(rec);
  }
  CHECK(qnls::decay_fit(series, 1.0) == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK_THROWS_AS(qnls::decay_fit(series, 0.5), std::invalid_argument);
}

TEST_CASE("pointwise decay comparison counts violations") {
  std::vector<DiagnosticsRecord> series;
  for (int i = 0; i <= 500; ++i) {
    DiagnosticsRecord rec;
    rec.t = 0.01 * i;
    rec.psi_int = rec.t > 0.0 ? 1.0 / (rec.t * rec.t) : 0.0;
    series.push_back(rec);
  }
  qnls::DecayCheck ok = qnls::check_pointwise_decay(series, 1.0 + 1e-9, 0.0, 0.0);
  CHECK(ok.checked > 0);
  CHECK(ok.violations == 0);
  CHECK(ok.worst_ratio == doctest::Approx(1.0).epsilon(1e-6));

  qnls::DecayCheck bad = qnls::check_pointwise_decay(series, 0.999, 0.0, 0.0);
  CHECK(bad.violations > 0);
  CHECK(bad.worst_ratio > 1.0);
}

TEST_CASE("checkpoint accumulator agrees with the record accumulator") {
  auto grid = std::make_shared<const RadialGrid>(3, 12.0, 512);
  // A nonzero f1 keeps the G1 spacetime norm away from zero below.
  NonlinearityModel model(3, ScalarFamily::parse("power:1*s^1"),
                          ScalarFamily::parse("power:1*s^1"), ScalarFamily::zero(), 1.0,
                          CriticalSign::Defocusing);
  std::vector<double> times;
  std::vector<qnls::RadialField> fields;
  std::vector<DiagnosticsRecord> series;
  for (int i = 0; i <= 4; ++i) {
    const double t = 0.25 * i;
    qnls::RadialField u = qnls::make_gaussian(grid, 1.0 / (1.0 + t), 1.0 + 0.1 * t, 0.0);
    times.push_back(t);
    fields.push_back(u);
    series.push_back(qnls::diagnose(u, model, t));
  }
  const double from_records = qnls::morawetz_accumulate(series, WeightSpec::unit());
  const double from_fields = qnls::morawetz_accumulate(times, fields, model, WeightSpec::unit());
  // The record route integrates the face-flux gradient, the field route the
  // nodal radial derivative; they agree only to the grid's O(dr^2).
  CHECK(from_fields == doctest::Approx(from_records).epsilon(5e-4));

  const double profiled =
      qnls::morawetz_accumulate(times, fields, model, WeightSpec::spatial_profile(4.0, 0.75));
  CHECK(profiled > 0.0);

  auto [h_norm, g_norm] =
      qnls::spacetime_norms(series, times, fields, model, 1.0, 1.0, 1.5);
  CHECK(h_norm == doctest::Approx(from_records).epsilon(1e-9));
  CHECK(g_norm > 0.0);
}
