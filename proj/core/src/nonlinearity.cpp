#include "qnls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace qnls {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    out.push_back(lo * std::pow(hi / lo, t));
  }
  return out;
}

void check_slot_signs(const ScalarFamily& f, const char* slot) {
  if (f.kind() == FamilyKind::PowerSum) {
    for (const auto& t : f.terms()) {
      if (t.coeff <= 0.0) {
        throw std::invalid_argument(std::string(slot) + ": power coefficients must be positive (omit vacuous terms), got " + g17(t.coeff));
      }
    }
  } else if (f.kind() == FamilyKind::Exponential) {
    if (f.amplitude() <= 0.0) {
      throw std::invalid_argument(std::string(slot) + ": exponential amplitude must be positive, got " + g17(f.amplitude()));
    }
  }
}

}  // namespace

CriticalSign parse_sign(const std::string& text) {
  if (text == "defocusing") return CriticalSign::Defocusing;
  if (text == "focusing") return CriticalSign::Focusing;
  if (text == "absent") return CriticalSign::Absent;
  throw std::invalid_argument("unrecognized sign '" + text +
                              "' (expected defocusing | focusing | absent)");
}

std::string sign_name(CriticalSign sign) {
  switch (sign) {
    case CriticalSign::Defocusing: return "defocusing";
    case CriticalSign::Focusing: return "focusing";
    case CriticalSign::Absent: return "absent";
  }
  return "absent";
}

NonlinearityModel::NonlinearityModel(int dimension, ScalarFamily h, ScalarFamily f1,
                                     ScalarFamily f2, double coupling, CriticalSign sign)
    : dimension_(dimension),
      two_star_(2.0 * dimension / (dimension - 2.0)),
      h_(std::move(h)),
      f1_(std::move(f1)),
      f2_(std::move(f2)),
      coupling_(coupling),
      sign_(sign),
      m_coercivity_(0.0) {
  if (dimension_ < 3) {
    throw std::invalid_argument("dimension must be at least 3, got " + std::to_string(dimension_));
  }
  if (!std::isfinite(coupling_) || coupling_ < 0.0) {
    throw std::invalid_argument("critical coupling must be finite and nonnegative");
  }
  if ((coupling_ == 0.0) != (sign_ == CriticalSign::Absent)) {
    throw std::invalid_argument(
        "critical coupling and sign disagree: use sign=absent exactly when the coupling is zero");
  }
  check_slot_signs(h_, "h");
  check_slot_signs(f1_, "F1");
  check_slot_signs(f2_, "F2");

  // Monotonicity guard plus the coercivity margin inf h(s)/sqrt(s), both
  // sampled on a wide logarithmic grid.
  if (!h_.is_zero()) {
    double m = std::numeric_limits<double>::infinity();
    for (double s : log_grid(1e-8, 1e8, 512)) {
      const double hv = h_.value(s);
      const double hp = h_.derivative(s);
      if (!(hv >= 0.0) || !(hp >= 0.0)) {
        throw std::invalid_argument("h must be nonnegative and nondecreasing; violated near s=" +
                                    g17(s));
      }
      m = std::min(m, hv / std::sqrt(s));
    }
    m_coercivity_ = std::isfinite(m) ? m : 0.0;
  }
}

double NonlinearityModel::sign_factor() const {
  switch (sign_) {
    case CriticalSign::Defocusing: return 1.0;
    case CriticalSign::Focusing: return -1.0;
    case CriticalSign::Absent: return 0.0;
  }
  return 0.0;
}

double NonlinearityModel::eval_h(double s, int order) const {
  switch (order) {
    case 0: return h_.value(s);
    case 1: return h_.derivative(s);
    case 2: return h_.second_derivative(s);
    default: throw std::invalid_argument("eval_h: order must be 0, 1 or 2");
  }
}

double NonlinearityModel::eval_G(double s, GPart part) const {
  switch (part) {
    case GPart::G1: return f1_.antiderivative(s);
    case GPart::G2: return f2_.antiderivative(s);
    case GPart::Full: return f1_.antiderivative(s) - f2_.antiderivative(s);
  }
  return 0.0;
}

double NonlinearityModel::hcrit(double s) const {
  return std::pow(h_.value(s), two_star_);
}

double NonlinearityModel::hcrit_renorm(double s) const {
  return hcrit(s) - std::pow(h0(), two_star_);
}

double NonlinearityModel::crit_potential(double s) const {
  switch (h_.kind()) {
    case FamilyKind::Zero:
      return 0.0;
    case FamilyKind::PowerSum:
      // The product h^(2*-1) h' vanishes as s -> 0 for every admissible
      // exponent, but the literal factors are 0 * inf there.
      if (s == 0.0) return 0.0;
      return std::pow(h_.value(s), two_star_ - 1.0) * h_.derivative(s);
    case FamilyKind::Exponential:
      return std::pow(h_.amplitude(), two_star_) * h_.rate() *
             std::exp(two_star_ * h_.rate() * s);
  }
  return 0.0;
}

double NonlinearityModel::p_coeff(double s) const {
  switch (h_.kind()) {
    case FamilyKind::Zero:
      return 0.0;
    case FamilyKind::PowerSum: {
      // 4 s h'^2 = 4 (sum_l c_l a_l s^(a_l - 1/2))^2, finite down to s = 0
      // for exponents >= 1/2.
      double g = 0.0;
      for (const auto& t : h_.terms()) {
        g += t.coeff * t.exponent * std::pow(s, t.exponent - 0.5);
      }
      return 4.0 * g * g;
    }
    case FamilyKind::Exponential: {
      const double hp = h_.derivative(s);
      return 4.0 * s * hp * hp;
    }
  }
  return 0.0;
}

double NonlinearityModel::q_coeff(double s) const {
  switch (h_.kind()) {
    case FamilyKind::Zero:
      return 0.0;
    case FamilyKind::PowerSum: {
      // 4 s^2 h'' h' expanded termwise so each factor s^(a_l + a_m - 1)
      // stays finite down to s = 0 for exponents >= 1/2.
      double acc = 0.0;
      for (const auto& tl : h_.terms()) {
        const double cl = tl.coeff * tl.exponent * (tl.exponent - 1.0);
        if (cl == 0.0) continue;
        for (const auto& tm : h_.terms()) {
          acc += cl * tm.coeff * tm.exponent * std::pow(s, tl.exponent + tm.exponent - 1.0);
        }
      }
      return 4.0 * acc;
    }
    case FamilyKind::Exponential:
      return 4.0 * s * s * h_.second_derivative(s) * h_.derivative(s);
  }
  return 0.0;
}

double NonlinearityModel::crit_theta_integrand(double s) const {
  const double coef = (dimension_ + 2.0) / two_star_;
  return dimension_ * s * crit_potential(s) - coef * hcrit_renorm(s);
}

double NonlinearityModel::crit_virial_integrand(double s) const {
  return s * crit_potential(s) - hcrit_renorm(s) / two_star_;
}

namespace {

struct DefectTracker {
  ConsistencyReport* report;
  double tolerance;
  const char* slot;
  const char* what;
  double worst = 0.0;
  double worst_s = 0.0;

  void feed(double analytic, double reference, double s) {
    const double scale = std::max({std::fabs(analytic), std::fabs(reference), 1e-12});
    const double defect = std::fabs(analytic - reference) / scale;
    if (defect > worst) {
      worst = defect;
      worst_s = s;
    }
  }

  ~DefectTracker() {
    report->max_defect = std::max(report->max_defect, worst);
    if (worst > tolerance) {
      report->pass = false;
      report->issues.push_back(std::string(slot) + ": " + what + " defect " + g17(worst) +
                               " at s=" + g17(worst_s));
    }
  }
};

double fd_cap(const ScalarFamily& f, double hi, double budget) {
  if (f.kind() == FamilyKind::Exponential) return std::min(hi, budget / f.rate());
  return hi;
}

}  // namespace

ConsistencyReport verify_calculus(const NonlinearityModel& model, int sample_count,
                                  double tolerance) {
  ConsistencyReport report;
  const struct {
    const char* name;
    const ScalarFamily& f;
  } slots[] = {{"h", model.h()}, {"F1", model.f1()}, {"F2", model.f2()}};

  for (const auto& slot : slots) {
    if (slot.f.is_zero()) continue;
    // Keep exp(rate*s) comfortably inside double range for the differencing.
    const double hi = fd_cap(slot.f, 1e6, 600.0);
    const auto grid = log_grid(1e-6, hi, sample_count);

    DefectTracker d1{&report, tolerance, slot.name, "derivative vs finite difference"};
    DefectTracker d2{&report, tolerance, slot.name, "second derivative vs finite difference"};
    DefectTracker d3{&report, tolerance, slot.name, "antiderivative vs finite difference"};
    for (double s : grid) {
      // Curvature length: ~s for power sums, 1/rate for exponentials.  A
      // step proportional to s would underflow into roundoff for
      // exponentials near the origin, where the value stays O(1) while the
      // increment shrinks with the step.
      const double step =
          slot.f.kind() == FamilyKind::Exponential ? 1e-5 / slot.f.rate() : s * 1e-6;
      d1.feed(slot.f.derivative(s),
              (slot.f.value(s + step) - slot.f.value(s - step)) / (2.0 * step), s);
      d2.feed(slot.f.second_derivative(s),
              (slot.f.derivative(s + step) - slot.f.derivative(s - step)) / (2.0 * step), s);
      d3.feed(slot.f.value(s),
              (slot.f.antiderivative(s + step) - slot.f.antiderivative(s - step)) / (2.0 * step),
              s);
    }
  }

  if (!model.h().is_zero()) {
    // Closed forms vs the literal products, on a grid where the literal
    // critical powers stay finite.
    const double hi = fd_cap(model.h(), 1e6, 600.0 / model.two_star());
    const auto grid = log_grid(1e-6, hi, sample_count);
    const double coef = (model.dimension() + 2.0) / model.two_star();

    DefectTracker dp{&report, tolerance, "h", "gradient coefficient vs literal 4 s h'^2"};
    DefectTracker dq{&report, tolerance, "h", "curvature coefficient vs literal 4 s^2 h'' h'"};
    DefectTracker dc{&report, tolerance, "h", "critical potential vs literal h^(2*-1) h'"};
    DefectTracker dt{&report, tolerance, "h", "critical theta integrand vs literal form"};
    DefectTracker dv{&report, tolerance, "h", "critical virial integrand vs literal form"};
    for (double s : grid) {
      const double hv = model.eval_h(s);
      const double hp = model.eval_h(s, 1);
      const double hpp = model.eval_h(s, 2);
      const double lit_crit = std::pow(hv, model.two_star() - 1.0) * hp;
      dp.feed(model.p_coeff(s), 4.0 * s * hp * hp, s);
      dq.feed(model.q_coeff(s), 4.0 * s * s * hpp * hp, s);
      dc.feed(model.crit_potential(s), lit_crit, s);
      dt.feed(model.crit_theta_integrand(s),
              model.dimension() * s * lit_crit - coef * model.hcrit_renorm(s), s);
      dv.feed(model.crit_virial_integrand(s),
              s * lit_crit - model.hcrit_renorm(s) / model.two_star(), s);
    }
  }

  return report;
}

}  // namespace qnls
