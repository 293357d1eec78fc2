#pragma once

#include <span>
#include <vector>

#include <qnls/diagnostics.hpp>
#include <qnls/nonlinearity.hpp>
#include <qnls/radial_grid.hpp>

namespace qnls {

// Time-integrator settings. `dt` is the starting step; on a failed nonlinear
// solve the step is halved and retried until it drops below `dt_min`.
// `picard_tol` bounds the relative change between successive iterates of the
// per-step nonlinear solve and `picard_max_iters` caps its sweeps. Records
// are appended every `output_stride` accepted steps and full field snapshots
// every `checkpoint_stride` records.
struct SolverConfig {
  double dt = 1e-3;
  double dt_min = 1e-9;
  double t_end = 1.0;
  double picard_tol = 1e-10;
  int picard_max_iters = 100;
  double blowup_factor = 1e6;
  int output_stride = 10;
  int checkpoint_stride = 100;

  // Throws std::invalid_argument naming the offending key.
  void validate() const;
};

enum class RunStatus { Completed, BlowupDetected, IterationFailure };
const char* status_name(RunStatus status);

// Convergence data for a single implicit midpoint step.
struct StepStats {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

// Everything a finished run hands back: the record series, periodic field
// snapshots, the final state, and deterministic work counters that stand in
// for timings so output files are bit-reproducible.
struct RunOutcome {
  RunStatus status;
  double t_star;  // time the blowup functional crossed (BlowupDetected)
  double t_fail;  // time the step cascade collapsed (IterationFailure)
  std::vector<DiagnosticsRecord> series;
  std::vector<double> checkpoint_times;
  std::vector<RadialField> checkpoint_fields;
  RadialField final_field;
  double t_final;
  long long steps_accepted;
  long long steps_rejected;
  long long picard_total;
  long long dt_halvings;
  double dt_final;
};

// One Crank–Nicolson step of width dt with the real nonlinear potential
// W = 2h′(ρ)Δ[h(ρ)] + F(ρ) ∓ A h^{2*−1}h′ resolved self-consistently at the
// interval midpoint: by under-relaxed fixed-point iteration for profiles
// with bounded quasilinear response, and by a damped Newton iteration on the
// midpoint system for square-root-like h, whose potential sensitivity grows
// without bound at near-zeros of the field. The field is updated only when
// the iteration converges.
StepStats step(RadialField& field, const NonlinearityModel& model, double dt,
               const SolverConfig& config);

// Integrates from t = 0 to t_end (or to detected blowup / step collapse),
// recording diagnostics along the way. The initial field is copied.
RunOutcome run(const RadialField& initial, const NonlinearityModel& model,
               const SolverConfig& config);

// True when some record's gradient functional ∫[|∇u|^2 + |∇h|^2] reaches
// blowup_factor times its value in the first record.
bool detect_blowup(std::span<const DiagnosticsRecord> series, const SolverConfig& config);

} // namespace qnls
