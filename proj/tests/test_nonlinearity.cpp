#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <qnls/nonlinearity.hpp>

using qnls::CriticalSign;
using qnls::GPart;
using qnls::NonlinearityModel;
using qnls::ScalarFamily;

namespace {

NonlinearityModel sqrt_model() {
  return NonlinearityModel(3, ScalarFamily::power_sum({{1.0, 0.5}}),
                           ScalarFamily::power_sum({{1.0, 2.0 / 3.0}}), ScalarFamily::zero(), 1.0,
                           CriticalSign::Defocusing);
}

}  // namespace

TEST_CASE("critical exponent and sign factor") {
  NonlinearityModel m = sqrt_model();
  CHECK(m.two_star() == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(m.sign_factor() == 1.0);

  NonlinearityModel focusing(3, ScalarFamily::power_sum({{1.0, 1.0}}), ScalarFamily::zero(),
                             ScalarFamily::zero(), 2.0, CriticalSign::Focusing);
  CHECK(focusing.sign_factor() == -1.0);

  NonlinearityModel absent(3, ScalarFamily::power_sum({{1.0, 1.0}}), ScalarFamily::zero(),
                           ScalarFamily::zero(), 0.0, CriticalSign::Absent);
  CHECK(absent.sign_factor() == 0.0);
}

TEST_CASE("constructor validates coupling and dimension") {
  ScalarFamily h = ScalarFamily::power_sum({{1.0, 1.0}});
  ScalarFamily z = ScalarFamily::zero();
  CHECK_THROWS_AS(NonlinearityModel(2, h, z, z, 1.0, CriticalSign::Defocusing),
                  std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel(3, h, z, z, 0.0, CriticalSign::Defocusing),
                  std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel(3, h, z, z, 1.0, CriticalSign::Absent),
                  std::invalid_argument);
  CHECK_THROWS_AS(NonlinearityModel(3, h, z, z, -1.0, CriticalSign::Focusing),
                  std::invalid_argument);
}

TEST_CASE("quasilinear coefficients stay finite for square root h") {
  NonlinearityModel m = sqrt_model();
  // 4 s h'(s)^2 = 4 s / (4 s) = 1 for every s, including the s -> 0 limit.
  CHECK(m.p_coeff(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.p_coeff(2.5) == doctest::Approx(1.0).epsilon(1e-14));
  // 4 s^2 h'' h' = 4 s^2 (-1/4 s^(-3/2)) (1/2 s^(-1/2)) = -1/2.
  CHECK(m.q_coeff(0.0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(m.q_coeff(9.0) == doctest::Approx(-0.5).epsilon(1e-14));
  // h^(2*-1) h' = s^(5/2) (1/2) s^(-1/2) = s^2 / 2; zero limit at s = 0.
  CHECK(m.crit_potential(0.0) == 0.0);
  CHECK(m.crit_potential(2.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("antiderivative split tracks both parts") {
  NonlinearityModel m(3, ScalarFamily::power_sum({{1.0, 1.0}}),
                      ScalarFamily::power_sum({{1.0, 1.0}}),
                      ScalarFamily::power_sum({{0.5, 0.5}}), 1.0, CriticalSign::Defocusing);
  // G1(s) = s^2/2, G2(s) = (0.5)(2/3) s^(3/2) = s^(3/2)/3.
  CHECK(m.eval_G(4.0, GPart::G1) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(m.eval_G(4.0, GPart::G2) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(m.eval_G(4.0, GPart::Full) == doctest::Approx(8.0 - 8.0 / 3.0).epsilon(1e-14));
  CHECK(m.eval_F(4.0) == doctest::Approx(4.0 - 1.0).epsilon(1e-14));
}

TEST_CASE("renormalized critical power vanishes at zero for exponential h") {
  NonlinearityModel m(3, ScalarFamily::exponential(1.0, 1.0), ScalarFamily::zero(),
                      ScalarFamily::zero(), 2.0, CriticalSign::Defocusing);
  CHECK(m.h0() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.hcrit(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.hcrit_renorm(0.0) == 0.0);
  CHECK(m.hcrit_renorm(1.0) == doctest::Approx(std::exp(6.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("coercivity floor is exact for square root h") {
  CHECK(sqrt_model().m_coercivity() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sqrt_model().conforms_coercivity());
}

TEST_CASE("analytic calculus agrees with finite differences") {
  qnls::ConsistencyReport a = qnls::verify_calculus(sqrt_model());
  CHECK(a.pass);
  CHECK(a.issues.empty());

  NonlinearityModel expm(3, ScalarFamily::exponential(1.0, 1.0),
                         ScalarFamily::exponential(0.5, 2.0), ScalarFamily::zero(), 2.0,
                         CriticalSign::Defocusing);
  qnls::ConsistencyReport b = qnls::verify_calculus(expm);
  CHECK(b.pass);

  NonlinearityModel mixed(3, ScalarFamily::power_sum({{1.0, 0.5}, {0.5, 1.0}}),
                          ScalarFamily::power_sum({{1.0, 1.0}}),
                          ScalarFamily::power_sum({{0.5, 0.5}}), 1.0, CriticalSign::Defocusing);
  qnls::ConsistencyReport c = qnls::verify_calculus(mixed);
  CHECK(c.pass);
}
