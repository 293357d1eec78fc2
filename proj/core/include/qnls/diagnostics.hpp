#pragma once

#include <span>
#include <utility>
#include <vector>

#include <qnls/nonlinearity.hpp>
#include <qnls/radial_grid.hpp>

namespace qnls {

// One row of the time series: every functional of the solution that the
// conservation checks, decay comparisons, and norm accumulators consume.
// Integrals are over R^N, evaluated with the grid's radial quadrature.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;       // ∫ |u|^2
  double energy = 0.0;     // (1/2)∫ [|∇u|^2 + |∇h|^2 - (G1-G2) ± (A/2*) h^{2*}]
  double variance = 0.0;   // J = ∫ r^2 |u|^2
  double momentum = 0.0;   // y = Im ∫ conj(u) (x·∇u)
  double grad_u_sq = 0.0;  // ∫ |∇u|^2
  double grad_h_sq = 0.0;  // ∫ |∇ h(|u|^2)|^2
  double g1_int = 0.0;     // ∫ G1(|u|^2)
  double g2_int = 0.0;     // ∫ G2(|u|^2)
  double hcrit_int = 0.0;  // ∫ [h(|u|^2)^{2*} - h(0)^{2*}]
  double psi_int = 0.0;    // ∫ Ψ = grad_h_sq + ∫|G1| + ∫G2 + (A/2*) hcrit_int
  double theta = 0.0;      // θ = dy/dt + 4E, assembled from the fields below
  double pseudo_P = 0.0;   // J + 4 t y + 8 t^2 E  (E of this record)

  // Auxiliary quadratures: the extra integrals the momentum-derivative
  // identity and the weighted accumulators need, stored so later checks can
  // run from the series alone.
  double g1_abs_int = 0.0;      // ∫ |G1(|u|^2)|
  double f_rho_int = 0.0;       // ∫ |u|^2 F(|u|^2)
  double quasi_p_int = 0.0;     // ∫ 4 ρ h'(ρ)^2      |∂_r|u||^2,  ρ = |u|^2
  double quasi_q_int = 0.0;     // ∫ 4 ρ^2 h''(ρ)h'(ρ)|∂_r|u||^2
  double crit_theta_int = 0.0;  // ∫ h^{2*-1}[N h'ρ - ((N+2)/2*) h] + baseline
  double crit_virial_int = 0.0; // ∫ h^{2*-1}[h'ρ - h/2*] + baseline
  double wall_ratio = 0.0;      // weighted outermost-cell mass / total mass

  // Model context carried so series-only checks know how to assemble
  // identities: spatial dimension and the signed critical coupling σA.
  int dimension = 3;
  double crit_weight = 0.0; // +A defocusing, -A focusing, 0 absent
};

// Evaluates every functional of `field` at time `t`. Throws
// std::domain_error if the field contains non-finite values.
DiagnosticsRecord diagnose(const RadialField& field, const NonlinearityModel& model, double t);

// Result of checking the two exact time-derivative identities on a
// uniformly spaced series: dJ/dt = -4y and dy/dt = (virial right side).
struct IdentityReport {
  bool pass = false;
  double variance_defect = 0.0; // max |dJ/dt + 4y| over interior records
  double variance_scale = 0.0;  // max |J|
  double momentum_defect = 0.0; // max |dy/dt - rhs| over interior records
  double momentum_scale = 0.0;  // max over records of Σ |rhs term|
  double tolerance = 0.0;       // relative tolerance both defects are held to
};

// Centered-difference check of both identities. Requires at least three
// records with uniform spacing (relative deviation below 1e-9); throws
// std::invalid_argument otherwise. `tol` is relative: pass requires
// variance_defect <= tol * variance_scale and likewise for momentum.
IdentityReport verify_virial(std::span<const DiagnosticsRecord> series, double tol);

// R(t_i) = P(t_i) - P(0) - 4 ∫_0^{t_i} τ θ(τ) dτ with P evaluated using the
// initial record's energy throughout and the integral by trapezoid rule.
// Identically zero in exact arithmetic for defocusing or absent coupling;
// throws std::invalid_argument when any record has focusing coupling.
std::vector<double> pseudoconformal_residual(std::span<const DiagnosticsRecord> series);

// Weight for the accumulated decay integrals.
//   Unit:           ∫ dt ∫ Ψ dx
//   PowerOfT{mu}:   ∫ t^{2-mu} dt ∫ Ψ dx            (time weight n(t)=t^mu)
//   SpatialProfile: ∫ dt ∫ [ψ(x)]^theta (1+r)^{-sigma} dx, with ψ the
//                   pointwise density of Ψ (needs stored fields, not records)
struct WeightSpec {
  enum class Kind { Unit, PowerOfT, SpatialProfile };
  Kind kind = Kind::Unit;
  double mu = 0.0;
  double sigma = 0.0;
  double theta = 0.0;

  static WeightSpec unit();
  static WeightSpec power_of_t(double mu);
  static WeightSpec spatial_profile(double sigma, double theta);
};

// Trapezoid accumulation of the weighted decay integral over the series.
// Supports Unit and PowerOfT; SpatialProfile needs stored fields and throws
// std::invalid_argument here. For PowerOfT the first cell starting at t=0 is
// integrated with the weight handled exactly (Ψ frozen at the next record),
// so integrable singularities of t^{2-mu} at the origin are admitted for
// mu < 3.
double morawetz_accumulate(std::span<const DiagnosticsRecord> series, const WeightSpec& weight);

// SpatialProfile (and, for completeness, the other kinds) accumulated from
// stored fields at checkpoint times: the pointwise density
//   ψ_j = (∂_r h)^2 + |G1| + G2 + (A/2*) [h^{2*} - h(0)^{2*}]
// is raised to theta, weighted by (1+r)^{-sigma}, integrated in space, then
// trapezoid-integrated across checkpoint times. Throws std::invalid_argument
// when fewer than two checkpoints are supplied.
double morawetz_accumulate(std::span<const double> checkpoint_times,
                           std::span<const RadialField> checkpoint_fields,
                           const NonlinearityModel& model,
                           const WeightSpec& weight);

// Returns (‖∫Ψdx‖_{L^p_t}, ‖G1‖_{L^q_t L^r_x}) over the series horizon.
// The first norm uses psi_int records; the second needs ∫|G1|^r dx, which is
// only available from records when r = 1. For r ≠ 1 use the checkpoint
// overload; this one throws std::invalid_argument.
std::pair<double, double> spacetime_norms(std::span<const DiagnosticsRecord> series,
                                          double p, double q, double r);

// As above with the spatial r-norm of G1 evaluated from stored fields at
// checkpoint times (trapezoid in time across checkpoints for the q-norm).
std::pair<double, double> spacetime_norms(std::span<const DiagnosticsRecord> series,
                                          std::span<const double> checkpoint_times,
                                          std::span<const RadialField> checkpoint_fields,
                                          const NonlinearityModel& model,
                                          double p, double q, double r);

// Least-squares slope of log ∫Ψdx against log t over records with
// t >= t_min. Requires t_min >= 1 and at least ten usable records (positive
// psi_int); throws std::invalid_argument otherwise.
double decay_fit(std::span<const DiagnosticsRecord> series, double t_min);

// Pointwise comparison of psi_int against a two-term decay envelope
//   rhs(t) = coeff_quadratic / t^2 + coeff_slow / t^{2 - loss_exponent}
// over records with t >= 1. Count of violations and the worst ratio
// lhs/rhs observed (0 when nothing was checked).
struct DecayCheck {
  int checked = 0;
  int violations = 0;
  double worst_ratio = 0.0;
};
DecayCheck check_pointwise_decay(std::span<const DiagnosticsRecord> series,
                                 double coeff_quadratic,
                                 double coeff_slow,
                                 double loss_exponent);

} // namespace qnls
