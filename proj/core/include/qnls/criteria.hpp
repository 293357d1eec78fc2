#pragma once

#include <limits>
#include <string>

#include <qnls/diagnostics.hpp>
#include <qnls/nonlinearity.hpp>
#include <qnls/radial_grid.hpp>

namespace qnls {

// Outcome classes for family-level hypothesis checks. `Proved` carries a
// closed-form certificate valid for every s >= 0; `SampledTrue` means a
// numerically constructed witness was verified on a dense refinement grid;
// `FalseAtSample` means the condition fails, at a sample point or
// asymptotically in the growth rates.
enum class Verdict { Proved, SampledTrue, FalseAtSample };
const char* verdict_name(Verdict verdict);

// One structural growth condition of the shape
//   |G1(s)| <= witness * s + budget(s)   for all s >= 0.
struct ConditionFinding {
  bool holds = false;
  Verdict verdict = Verdict::FalseAtSample;
  double witness = 0.0; // linear-slack constant when the condition holds
};

// Global-existence hypotheses; meaningful for defocusing or absent coupling.
struct ExistenceReport {
  ConditionFinding case_a; // budget G2(s)
  ConditionFinding case_b; // budget (A/2*) [h(s)]^{2*}
};

// Finite-time blowup hypotheses; meaningful for focusing coupling.
struct BlowupReport {
  bool feasible_k = false; // exists k >= -1/2 with s h''(s) <= k h'(s)
  double k = 0.0;
  bool case_c = false;     // E0 <= 0 plus two pointwise sign conditions
  bool case_d = false;     // quantified variant with the witnesses below
  double m_tilde_1 = 0.0;  // N h' s - (2[(k+1)N+1]/2*) h >= m_tilde_1 * h
  double m_tilde_2 = 0.0;  // linear slack in the combined growth bound
  double sign_combo = 0.0; // 2[(2k+1)N+2] E0 + m_tilde_2 M0, needs <= 0
  double y0 = 0.0;
  bool applicable = false;  // y0 > 0 and (case_c or case_d)
  double time_bound = 0.0;  // J(0) / (4 y(0)) when applicable
};

// Two-branch scaling exponents with small/large amplitude witnesses:
//   [|G1|]^{gamma1} <= m1 s          [|G1|]^{gamma2} <= m1p [h]^{2*}   (s <= 1)
//   [|G1|]^{gamma1_t} <= m2 s        [|G1|]^{gamma2_t} <= m2p [h]^{2*} (s > 1)
struct GammaSet {
  bool trivial = false;   // G1 == 0, every bound holds with zero constants
  bool available = false; // witnesses constructed for this family pairing
  double gamma1 = 0.0, gamma2 = 0.0;
  double gamma1_t = 0.0, gamma2_t = 0.0;
  double m1 = 0.0, m1p = 0.0;
  double m2 = 0.0, m2p = 0.0;
};

enum class DecayCase { Case1, Case2, Neither };
const char* decay_case_name(DecayCase value);

// Sign classification of the four pointwise channels
//   X1 = 2 h'' h' s + (h')^2        X2 = N h' s - ((N+2)/2*) h
//   X3 = (N+2) G1 - N F1 s          X4 = N F2 s - (N+2) G2.
// Case1 requires X1, X2, X3, X4 >= 0 everywhere. Case2 allows each channel
// to be non-positive instead, bounded below by -k_i times its natural scale;
// favorable channels contribute k_i = 0.
struct CaseReport {
  DecayCase decay_case = DecayCase::Neither;
  bool sign_x1 = false, sign_x2 = false, sign_x3 = false, sign_x4 = false;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
  double l_value = 0.0; // max(N k1, k2, k3, k4)
};

// Conjugate exponent bookkeeping for the interpolation steps. The first four
// are the splitting exponents behind the M_r coefficient; the last four
// depend on the requested spatial norm order r.
struct HolderExponents {
  double tau1_tilde = 0.0, tau1_tilde_prime = 0.0;
  double tau2_tilde = 0.0, tau2_tilde_prime = 0.0;
  double tau3 = 0.0, tau4 = 0.0;
  double tau3_tilde = 0.0, tau4_tilde = 0.0;
};

// Closed-form right sides for the weighted decay integrals, plus the
// pointwise envelope coefficients: psi_int <= C1/t^2 + C2/t^{2-loss} for
// t >= 1 with loss = l (1+Mr)/(1-Mr). Entries that do not apply to the
// classified case are NaN.
struct MorawetzConstants {
  double M1 = 0.0, M2 = 0.0, M3 = 0.0, M4 = 0.0, M5 = 0.0;
  double C1 = 0.0, C2 = 0.0, C3 = 0.0;
  double C_u0 = 0.0; // ∫ |x u0|^2
};

// Parameters for the weighted estimates: spatial profile (1+r)^{-sigma}
// raised against exponent theta, time weight t^mu, and the space-time norm
// orders (NaN = not requested).
struct MorawetzParams {
  double theta = 0.75;
  double mu = 2.0;
  double sigma = 4.0;
  double p = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
};

struct SpacetimeBounds {
  double h_bound = 0.0; // right side for ||∫Psi dx||_{L^p_t}
  double i_bound = 0.0; // right side for ||G1||_{L^q_t L^r_x}
  double tau3 = 0.0, tau4 = 0.0, tau3_tilde = 0.0, tau4_tilde = 0.0;
};

struct CriteriaReport {
  int dimension = 3;
  CriticalSign sign = CriticalSign::Absent;
  ExistenceReport existence;
  BlowupReport blowup;
  GammaSet gamma_set;
  double mr = std::numeric_limits<double>::quiet_NaN();
  double sobolev_cs = 0.0;
  CaseReport classification;
  MorawetzConstants morawetz;
  HolderExponents holder;
  double h_bound = std::numeric_limits<double>::quiet_NaN();
  double i_bound = std::numeric_limits<double>::quiet_NaN();
  std::string spacetime_note; // named inequality when the orders are rejected
};

// Checks the two global-existence growth conditions. Throws
// std::invalid_argument for focusing coupling.
ExistenceReport check_global_existence(const NonlinearityModel& model);

// Checks the finite-time blowup hypotheses against the initial data. Throws
// std::invalid_argument for non-focusing coupling. `u0` supplies E0, M0,
// J(0) and y(0); `u0_field` is scanned to confirm the data is finite.
BlowupReport check_blowup(const NonlinearityModel& model, const DiagnosticsRecord& u0,
                          const RadialField& u0_field);

// Constructs the scaling exponents and witnesses for the family pairing.
// Never throws: reports trivial (G1 == 0) or unavailable instead.
GammaSet gamma_witnesses(const NonlinearityModel& model);

// Σ_j (m_j M0)^{2/N} (m_j' C_s)^{(N-2)/N} over the two amplitude branches.
// Returns 0 when G1 == 0; throws std::invalid_argument when no witness
// construction exists for the family pairing.
double compute_Mr(const NonlinearityModel& model, const DiagnosticsRecord& u0);

// Classifies the four sign channels and the loss constant l.
CaseReport classify_case_and_l(const NonlinearityModel& model);

// Evaluates the closed-form decay constants for the classified case. Throws
// std::invalid_argument when M_r >= 1 (or is unavailable), or when theta,
// mu, or sigma lie outside their stated ranges.
MorawetzConstants morawetz_bound_constants(const CriteriaReport& report,
                                           const DiagnosticsRecord& u0,
                                           const MorawetzParams& params);

// Evaluates the space-time norm bounds for orders (p, q, r), throwing
// std::invalid_argument that names the violated inequality when the orders
// are inadmissible.
SpacetimeBounds spacetime_bound_constants(const CriteriaReport& report,
                                          const DiagnosticsRecord& u0,
                                          double p, double q, double r);

// Assembles the full report for one model and initial state: the branch
// matching the critical sign is evaluated, bound constants are filled when
// their hypotheses hold, and requested space-time orders are either bounded
// or recorded as rejected in `spacetime_note`.
CriteriaReport evaluate_criteria(const NonlinearityModel& model, const DiagnosticsRecord& u0,
                                 const RadialField& u0_field,
                                 const MorawetzParams& params = MorawetzParams{});

} // namespace qnls
