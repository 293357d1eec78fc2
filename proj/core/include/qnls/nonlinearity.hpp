#pragma once

#include <string>
#include <vector>

#include "qnls/scalar_family.hpp"

namespace qnls {

/// Sign of the critical coupling term in the equation and the energy.
/// Absent means the term is switched off entirely (coupling must be zero).
enum class CriticalSign { Defocusing, Focusing, Absent };

CriticalSign parse_sign(const std::string& text);
std::string sign_name(CriticalSign sign);

/// Which part of the integrated nonlinearity G = G1 - G2 to evaluate.
enum class GPart { G1, G2, Full };

/// Report from verify_calculus(): every analytic derivative in the model is
/// cross-checked against central finite differences.
struct ConsistencyReport {
  bool pass = true;
  double max_defect = 0.0;              // worst relative defect found
  std::vector<std::string> issues;      // human-readable failures (empty when pass)
};

/// The full nonlinear structure of the equation
///
///   i u_t = Lap(u) + 2 h'(r) Lap(h(r)) u + F(r) u -+ A h(r)^(2s-1) h'(r) u,
///   r = |u|^2,  2s = 2N/(N-2),  F = F1 - F2,
///
/// assembled from three scalar families plus the coupling A and its sign.
/// All secondary quantities that are prone to 0 * inf at r = 0 (the
/// quasilinear coefficients for square-root-like h, the critical-term
/// integrands) are exposed here in closed forms that stay finite.
class NonlinearityModel {
 public:
  NonlinearityModel(int dimension, ScalarFamily h, ScalarFamily f1, ScalarFamily f2,
                    double coupling, CriticalSign sign);

  int dimension() const { return dimension_; }
  /// Critical Sobolev exponent 2N/(N-2).
  double two_star() const { return two_star_; }
  const ScalarFamily& h() const { return h_; }
  const ScalarFamily& f1() const { return f1_; }
  const ScalarFamily& f2() const { return f2_; }
  double coupling() const { return coupling_; }
  CriticalSign sign() const { return sign_; }
  /// +1 defocusing, -1 focusing, 0 absent.
  double sign_factor() const;

  /// h and its derivatives; order in {0, 1, 2}.
  double eval_h(double s, int order = 0) const;
  double h0() const { return h_.value(0.0); }

  double eval_F1(double s) const { return f1_.value(s); }
  double eval_F2(double s) const { return f2_.value(s); }
  double eval_F(double s) const { return f1_.value(s) - f2_.value(s); }

  /// Antiderivatives of F1 / F2 / F, all vanishing at s = 0.
  double eval_G(double s, GPart part = GPart::Full) const;

  /// h(s)^(2*) literally, and with the s = 0 baseline subtracted.  The
  /// renormalized form is what appears in integrals over all of space:
  /// for exponential h the literal power tends to a positive constant at
  /// infinity and the baseline subtraction is what makes it integrable.
  double hcrit(double s) const;
  double hcrit_renorm(double s) const;

  /// h^(2*-1) h', the critical contribution to the potential.  Returns the
  /// s -> 0 limit (zero) at s = 0 where the literal product is 0 * inf for
  /// square-root-like h.
  double crit_potential(double s) const;

  /// 4 s h'(s)^2 and 4 s^2 h''(s) h'(s), the two gradient-channel
  /// coefficients.  Closed forms per family: the literal products are
  /// indeterminate at s = 0 when h has a square-root term.
  double p_coeff(double s) const;
  double q_coeff(double s) const;

  /// Integrand of the critical term in the dilation-identity derivative:
  ///   h^(2*-1) [N h' s - ((N+2)/2*) h] + ((N+2)/2*) h(0)^(2*).
  double crit_theta_integrand(double s) const;

  /// Integrand of the critical term in the dilation identity itself:
  ///   h^(2*-1) [h' s - h/2*] + h(0)^(2*)/2*.
  double crit_virial_integrand(double s) const;

  /// Sampled lower bound of h(s)/sqrt(s) on a wide logarithmic grid; the
  /// model conforms to the coercivity assumption when it is positive.
  double m_coercivity() const { return m_coercivity_; }
  bool conforms_coercivity() const { return m_coercivity_ > 0.0; }

 private:
  int dimension_;
  double two_star_;
  ScalarFamily h_, f1_, f2_;
  double coupling_;
  CriticalSign sign_;
  double m_coercivity_;
};

/// Cross-checks every analytic derivative/antiderivative pair in the model
/// against central finite differences on a logarithmic sample grid, and the
/// closed-form gradient-channel coefficients against their literal products.
ConsistencyReport verify_calculus(const NonlinearityModel& model, int sample_count = 512,
                                  double tolerance = 1e-5);

}  // namespace qnls
