#include <qnls/dynamics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qnls {

namespace {

// Amplitude floor below which the quasilinear channel is treated as zero:
// where |u|^2 has underflowed this far the state carries no dynamics, and
// evaluating h' there is ill-defined for families singular at the origin.
constexpr double kQuasiFloor = 1e-100;

// Relative density shift regularizing the quasilinear coefficient for
// profiles with h' unbounded at the origin. At interference nulls the
// density dips tens of orders of magnitude below the field's peak, where
// the coefficient h'(ρ)Δh prescribes phase advances of many radians per
// step — pure aliasing — with unbounded sensitivity to ρ, a singular
// manifold no root finder can sit on. Evaluating the coefficient at ρ + ε
// caps the rotation rate at Δh/√ε and keeps the equation smooth and
// monotone in ρ; ε is pinned at 1e-12 of the peak density, so only nodes
// whose amplitude is below a millionth of the field's peak feel the cap,
// while every resolvable node is perturbed by O(ε/ρ), far below the
// discretization error.
constexpr double kQuasiShiftRel = 1e-12;

// Real midpoint potential W(ρ) in i u_t = L u + W(ρ) u:
//   W = 2 h'(ρ + ε) L[h(ρ) - h(0)] + F(ρ) - σA h^{2*-1}h'(ρ),
// with ε the vacuum regularization shift (zero for profiles with bounded
// quasilinear response, which need none).
void midpoint_potential(const RadialGrid& grid, const NonlinearityModel& model,
                        std::span<const Complex> v, double shift,
                        std::vector<double>& h_shift, std::vector<double>& lap_h,
                        std::vector<double>& out) {
  const std::size_t m = v.size();
  for (std::size_t j = 0; j < m; ++j)
    h_shift[j] = model.eval_h(std::norm(v[j])) - model.h0();
  grid.apply_laplacian(h_shift, lap_h);
  const double crit_weight = model.sign_factor() * model.coupling();
  for (std::size_t j = 0; j < m; ++j) {
    const double rho = std::norm(v[j]);
    double quasi = 0.0;
    if (shift > 0.0) {
      quasi = 2.0 * model.eval_h(rho + shift, 1) * lap_h[j];
    } else if (rho > kQuasiFloor) {
      quasi = 2.0 * model.eval_h(rho, 1) * lap_h[j];
    }
    out[j] = quasi + model.eval_F(rho) - crit_weight * model.crit_potential(rho);
  }
}

// Regularization shift for the current state: machine noise of the peak
// density.
double quasi_shift(std::span<const Complex> v) {
  double peak = 0.0;
  for (const Complex& z : v) peak = std::max(peak, std::norm(z));
  return kQuasiShiftRel * peak;
}

// Solves (I + i(dt/2)(L + diag(w))) x = rhs by the Thomas algorithm. The
// matrix is identity plus an anti-Hermitian part, so the pivots never sit
// near zero and no pivoting is needed.
void crank_nicolson_solve(const RadialGrid& grid, std::span<const double> w, double half_dt,
                          std::span<const Complex> rhs, std::vector<Complex>& scratch,
                          std::vector<Complex>& x) {
  const auto lower = grid.lap_lower();
  const auto diag = grid.lap_diag();
  const auto upper = grid.lap_upper();
  const std::size_t m = rhs.size();
  const Complex ih{0.0, half_dt};

  // scratch holds the eliminated super-diagonal, x the transformed rhs.
  Complex pivot = 1.0 + ih * (diag[0] + w[0]);
  scratch[0] = ih * upper[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t j = 1; j < m; ++j) {
    const Complex a = ih * lower[j];
    pivot = 1.0 + ih * (diag[j] + w[j]) - a * scratch[j - 1];
    scratch[j] = ih * upper[j] / pivot;
    x[j] = (rhs[j] - a * x[j - 1]) / pivot;
  }
  for (std::size_t j = m - 1; j-- > 0;) x[j] -= scratch[j] * x[j + 1];
}

bool all_finite(std::span<const Complex> values) {
  for (const Complex& z : values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

// --- Newton machinery for profiles with unbounded quasilinear response ---
//
// For square-root-like h the potential's sensitivity to the density grows
// without bound at near-zeros of the field (the h'' channel), so fixed-point
// iteration on a frozen diagonal potential cannot contract there at any step
// size. The midpoint system itself stays well posed; we solve it with a
// damped Newton iteration whose Jacobian carries the full density coupling.
// The Jacobian is real-linear but not complex-linear (it acts through
// Re(conj(m) du)), so it is assembled over (Re u, Im u) pairs as a
// 2x2-block tridiagonal matrix and factored by block elimination.

struct Mat2 {
  double a, b, c, d;  // [[a, b], [c, d]]
};
struct Vec2 {
  double x, y;
};

Mat2 inverse(const Mat2& m) {
  const double s = 1.0 / (m.a * m.d - m.b * m.c);
  return {m.d * s, -m.b * s, -m.c * s, m.a * s};
}
Mat2 mul(const Mat2& l, const Mat2& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c,
          l.c * r.b + l.d * r.d};
}
Vec2 mul(const Mat2& m, const Vec2& v) {
  return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}
Mat2 sub(const Mat2& l, const Mat2& r) { return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d}; }
Vec2 sub(const Vec2& l, const Vec2& r) { return {l.x - r.x, l.y - r.y}; }

// Midpoint residual R(U) = U - u + i dt (L m + W(m) m), m = (u + U)/2, whose
// root is exactly the converged Crank–Nicolson step. Returns the sup norm
// and, through `scale`, the largest term magnitude entering any component:
// the residual cannot be driven meaningfully below roundoff of that scale.
double midpoint_residual(const RadialGrid& grid, const NonlinearityModel& model,
                         std::span<const Complex> u, std::span<const Complex> next, double dt,
                         double shift, std::vector<Complex>& mid,
                         std::vector<double>& h_shift, std::vector<double>& lap_h,
                         std::vector<double>& w, std::vector<Complex>& lap_m,
                         std::vector<Complex>& residual, double& scale) {
  const std::size_t m = u.size();
  for (std::size_t j = 0; j < m; ++j) mid[j] = 0.5 * (u[j] + next[j]);
  midpoint_potential(grid, model, mid, shift, h_shift, lap_h, w);
  grid.apply_laplacian(mid, lap_m);
  const Complex idt{0.0, dt};
  double worst = 0.0;
  scale = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    residual[j] = next[j] - u[j] + idt * (lap_m[j] + w[j] * mid[j]);
    worst = std::max(worst, std::abs(residual[j]));
    scale = std::max(scale,
                     std::abs(next[j]) + dt * (std::abs(lap_m[j]) + std::abs(w[j] * mid[j])));
  }
  return worst;
}

// One damped Newton solve of the midpoint system. Writes the accepted state
// into `next`; reports convergence through `stats` with the same residual
// semantics as the fixed-point path (relative sup change per update).
void newton_midpoint(const RadialGrid& grid, const NonlinearityModel& model,
                     std::span<const Complex> u, double dt, const SolverConfig& config,
                     StepStats& stats, std::vector<Complex>& next) {
  const auto lower = grid.lap_lower();
  const auto diag = grid.lap_diag();
  const auto upper = grid.lap_upper();
  const std::size_t m = u.size();
  const double crit_weight = model.sign_factor() * model.coupling();
  const double two_star = model.two_star();

  std::vector<Complex> mid(m), lap_m(m), residual(m), trial(m);
  std::vector<double> h_shift(m), lap_h(m), w(m), hp(m), hp_reg(m);
  std::vector<Mat2> blk_lower(m), blk_diag(m), blk_upper(m), elim(m);
  std::vector<Vec2> rhs(m), sol(m);
  std::vector<Complex> scratch(m);

  // The regularization shift is frozen from the pre-step state so the
  // equation being rooted does not move under the iteration.
  const double shift = quasi_shift(u);

  next.assign(u.begin(), u.end());
  double rscale = 0.0;
  double rnorm = midpoint_residual(grid, model, u, next, dt, shift, mid, h_shift, lap_h, w,
                                   lap_m, residual, rscale);

  // Levenberg-style diagonal damping, engaged when a sharp null sweeping
  // across nodes puts the full Newton step outside its locally quadratic
  // region: damping bends the correction toward a short guaranteed-descent
  // step, and decays again once plain steps are accepted.
  double damping = 0.0;

  for (int k = 1; k <= config.picard_max_iters; ++k) {
    // Converged when the midpoint equation's defect is small relative to the
    // terms that form it. Checked before the solve: near the root the next
    // Newton correction sits below the residual's roundoff floor and no
    // strict decrease is possible.
    stats.residual = rnorm / std::max(rscale, 1e-300);
    if (stats.residual <= config.picard_tol) {
      // One clean solve with the converged potential restores the exact
      // Cayley form (I + iA)u+ = (I - iA)u, keeping the mass quadrature
      // conserved to roundoff rather than to the tolerance. The potential
      // held in `w` was refreshed by the accepted residual evaluation.
      const double half_dt = 0.5 * dt;
      const Complex ih{0.0, half_dt};
      grid.apply_laplacian(u, scratch);
      for (std::size_t j = 0; j < m; ++j) trial[j] = u[j] - ih * (scratch[j] + w[j] * u[j]);
      crank_nicolson_solve(grid, w, half_dt, trial, scratch, next);
      if (!all_finite(next)) return;
      stats.converged = true;
      return;
    }
    stats.iterations = k;

    // Density floor for Jacobian coefficients only, set just high enough to
    // keep h', h'' and F' finite in double arithmetic at numerical-vacuum
    // densities. It must not sit any higher: for square-root-like h the
    // coupling h'(ρ)√ρ stays O(1) down to vacuum, and flooring real entries
    // away degrades the quadratic iteration to a linear crawl. The residual
    // itself is never floored, so the root is unchanged.
    double peak = 0.0;
    for (std::size_t j = 0; j < m; ++j) peak = std::max(peak, std::norm(mid[j]));
    const double floor = std::max(1e-90, 1e-40 * peak);

    for (std::size_t j = 0; j < m; ++j) {
      hp[j] = model.eval_h(std::max(std::norm(mid[j]), floor), 1);
      hp_reg[j] = model.eval_h(std::max(std::norm(mid[j]) + shift, floor), 1);
    }

    for (std::size_t j = 0; j < m; ++j) {
      const double rho = std::max(std::norm(mid[j]), floor);
      const double hv = model.eval_h(rho);
      const double hpp = model.eval_h(rho, 2);
      const double hpp_reg = model.eval_h(std::max(std::norm(mid[j]) + shift, floor), 2);
      const double fp = model.f1().derivative(rho) - model.f2().derivative(rho);
      // d/drho of h^{2*-1} h'.
      const double crit_p = (two_star - 1.0) * std::pow(hv, two_star - 2.0) * hp[j] * hp[j] +
                            std::pow(hv, two_star - 1.0) * hpp;
      const double q = 2.0 * hpp_reg * lap_h[j] + fp - crit_weight * crit_p;

      const double a = mid[j].real(), b = mid[j].imag();
      const auto rot = [](double s) { return Mat2{0.0, -s, s, 0.0}; };
      // i m_j (row a_k b_k) outer products from the density coupling.
      const auto outer = [&](double ak, double bk, double c) {
        return Mat2{-b * ak * c, -b * bk * c, a * ak * c, a * bk * c};
      };

      const double half = 0.5 * dt;
      Mat2 d = rot(half * (diag[j] + w[j]));
      d.a += 1.0;
      d.d += 1.0;
      const Mat2 local = outer(a, b, dt * (q + 2.0 * hp_reg[j] * diag[j] * hp[j]));
      blk_diag[j] = {d.a + local.a, d.b + local.b, d.c + local.c, d.d + local.d};
      if (j > 0) {
        const double am = mid[j - 1].real(), bm = mid[j - 1].imag();
        const Mat2 off = outer(am, bm, dt * 2.0 * hp_reg[j] * lower[j] * hp[j - 1]);
        const Mat2 r = rot(half * lower[j]);
        blk_lower[j] = {r.a + off.a, r.b + off.b, r.c + off.c, r.d + off.d};
      }
      if (j + 1 < m) {
        const double ap = mid[j + 1].real(), bp = mid[j + 1].imag();
        const Mat2 off = outer(ap, bp, dt * 2.0 * hp_reg[j] * upper[j] * hp[j + 1]);
        const Mat2 r = rot(half * upper[j]);
        blk_upper[j] = {r.a + off.a, r.b + off.b, r.c + off.c, r.d + off.d};
      }
      rhs[j] = {-residual[j].real(), -residual[j].imag()};
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 6 && !accepted; ++attempt) {
      // Block Thomas elimination for (J + damping I) delta = -R.
      const auto damped = [&](std::size_t j) {
        Mat2 d = blk_diag[j];
        d.a += damping;
        d.d += damping;
        return d;
      };
      Mat2 pivot = inverse(damped(0));
      elim[0] = mul(pivot, blk_upper[0]);
      sol[0] = mul(pivot, rhs[0]);
      for (std::size_t j = 1; j < m; ++j) {
        pivot = inverse(sub(damped(j), mul(blk_lower[j], elim[j - 1])));
        if (j + 1 < m) elim[j] = mul(pivot, blk_upper[j]);
        sol[j] = mul(pivot, sub(rhs[j], mul(blk_lower[j], sol[j - 1])));
      }
      for (std::size_t j = m - 1; j-- > 0;) sol[j] = sub(sol[j], mul(elim[j], sol[j + 1]));

      double step_norm = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        step_norm = std::max(step_norm, std::hypot(sol[j].x, sol[j].y));

      if (std::isfinite(step_norm)) {
        // Backtracking on the residual sup norm keeps the iteration inside
        // the basin when the coupling is near-singular.
        double lambda = 1.0;
        for (int t = 0; t < 6; ++t) {
          for (std::size_t j = 0; j < m; ++j)
            trial[j] = next[j] + lambda * Complex{sol[j].x, sol[j].y};
          double try_scale = 0.0;
          const double try_norm = midpoint_residual(grid, model, u, trial, dt, shift, mid,
                                                    h_shift, lap_h, w, lap_m, residual,
                                                    try_scale);
          if (std::isfinite(try_norm) && try_norm <= (1.0 - 1e-4 * lambda) * rnorm) {
            next.swap(trial);
            rnorm = try_norm;
            rscale = try_scale;
            accepted = true;
            break;
          }
          lambda *= 0.5;
        }
      }
      if (!accepted) damping = damping == 0.0 ? 1.0 : damping * 16.0;
    }
    if (!accepted) break;
    damping *= 0.25;
    if (damping < 1.0) damping = 0.0;
  }

  // Second stage, for rotation-collapse events: where a deep null under a
  // strong Δh makes the nonlinear rotation per step large, the root still
  // exists but the approach to it is not monotone in the residual norm,
  // which defeats the line search above. The same root is a stable fixed
  // point of plain potential blending, so the remaining iteration budget
  // runs under-relaxed sweeps — solve the Cayley step for the frozen
  // potential, re-evaluate the potential at the new midpoint, blend —
  // judged by the same true-defect criterion. The sweeps restart from the
  // pre-step state: the abandoned Newton iterate sits in the non-monotone
  // pocket that defeated it and makes a poor seed.
  std::vector<Complex> candidate(m);
  std::vector<double> w_mix(m);
  midpoint_potential(grid, model, u, shift, h_shift, lap_h, w_mix);
  double c_scale = 0.0;
  double c_norm = 0.0;
  double prev_rel = std::numeric_limits<double>::infinity();
  double relax = 1.0;
  const double half_dt = 0.5 * dt;
  const Complex ih{0.0, half_dt};
  for (int k = stats.iterations + 1; k <= config.picard_max_iters; ++k) {
    stats.iterations = k;
    grid.apply_laplacian(u, scratch);
    for (std::size_t j = 0; j < m; ++j) trial[j] = u[j] - ih * (scratch[j] + w_mix[j] * u[j]);
    crank_nicolson_solve(grid, w_mix, half_dt, trial, scratch, candidate);
    if (!all_finite(candidate)) return;
    c_norm = midpoint_residual(grid, model, u, candidate, dt, shift, mid, h_shift, lap_h, w,
                               lap_m, residual, c_scale);
    stats.residual = c_norm / std::max(c_scale, 1e-300);
    if (stats.residual <= config.picard_tol) {
      // The candidate is itself an exact Cayley transform for the real
      // blended potential, so the mass quadrature is already conserved to
      // roundoff and no cleanup pass is needed.
      next.swap(candidate);
      stats.converged = true;
      return;
    }
    if (stats.residual > 0.9 * prev_rel) relax = std::max(0.5 * relax, 1.0 / 64.0);
    prev_rel = stats.residual;
    for (std::size_t j = 0; j < m; ++j) w_mix[j] += relax * (w[j] - w_mix[j]);
  }
}

}  // namespace

void SolverConfig::validate() const {
  const auto fail = [](const char* message) { throw std::invalid_argument(message); };
  if (!(dt > 0.0) || !std::isfinite(dt)) fail("solver dt must be positive and finite");
  if (!(dt_min > 0.0)) fail("solver dt_min must be positive");
  if (dt_min > dt) fail("solver dt_min must not exceed dt");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("solver t_end must be positive and finite");
  if (!(picard_tol > 0.0)) fail("solver picard_tol must be positive");
  if (picard_max_iters < 1) fail("solver picard_max_iters must be at least 1");
  if (!(blowup_factor > 1.0)) fail("solver blowup_factor must exceed 1");
  if (output_stride < 1) fail("solver output_stride must be at least 1");
  if (checkpoint_stride < 1) fail("solver checkpoint_stride must be at least 1");
}

const char* status_name(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "Completed";
    case RunStatus::BlowupDetected: return "BlowupDetected";
    case RunStatus::IterationFailure: return "IterationFailure";
  }
  return "unknown";
}

StepStats step(RadialField& field, const NonlinearityModel& model, double dt,
               const SolverConfig& config) {
  const RadialGrid& grid = field.grid();
  const auto u = field.values();
  const std::size_t m = u.size();
  const double half_dt = 0.5 * dt;

  StepStats stats;

  // Profiles whose quasilinear response is unbounded at small density
  // (square-root-like h) defeat fixed-point iteration near zeros of the
  // field; they take the Newton path. Everything else converges in a few
  // sweeps of plain iteration on the frozen diagonal potential.
  const bool singular_quasi =
      model.h().kind() == FamilyKind::PowerSum && model.h().min_exponent() < 1.0;
  if (singular_quasi) {
    std::vector<Complex> next(m);
    newton_midpoint(grid, model, u, dt, config, stats, next);
    if (stats.converged) std::copy(next.begin(), next.end(), u.begin());
    return stats;
  }

  std::vector<double> w(m), w_next(m), h_shift(m), lap_h(m);
  std::vector<Complex> rhs(m), lap_u(m), scratch(m), candidate(m), previous(m), midpoint(m);

  // Seed the potential from the current state, then iterate: solve the linear
  // step for the frozen potential, re-evaluate the potential at the midpoint,
  // and blend it in with an adaptive relaxation factor.
  midpoint_potential(grid, model, u, 0.0, h_shift, lap_h, w);
  grid.apply_laplacian(u, lap_u);

  double relax = 1.0;
  double prev_residual = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= config.picard_max_iters; ++k) {
    stats.iterations = k;
    const Complex ih{0.0, half_dt};
    for (std::size_t j = 0; j < m; ++j) rhs[j] = u[j] - ih * (lap_u[j] + w[j] * u[j]);
    crank_nicolson_solve(grid, w, half_dt, rhs, scratch, candidate);
    if (!all_finite(candidate)) return stats;

    double change = 0.0, magnitude = 0.0;
    if (k > 1) {
      for (std::size_t j = 0; j < m; ++j) {
        change = std::max(change, std::abs(candidate[j] - previous[j]));
        magnitude = std::max(magnitude, std::abs(candidate[j]));
      }
      stats.residual = change / std::max(magnitude, 1e-300);
      if (stats.residual <= config.picard_tol) {
        stats.converged = true;
        std::copy(candidate.begin(), candidate.end(), field.values().begin());
        return stats;
      }
      if (stats.residual > 0.9 * prev_residual) relax = std::max(relax * 0.5, 1.0 / 64.0);
      prev_residual = stats.residual;
    }
    previous = candidate;

    for (std::size_t j = 0; j < m; ++j) midpoint[j] = 0.5 * (u[j] + candidate[j]);
    midpoint_potential(grid, model, midpoint, 0.0, h_shift, lap_h, w_next);
    for (std::size_t j = 0; j < m; ++j) w[j] += relax * (w_next[j] - w[j]);
  }
  return stats;
}

RunOutcome run(const RadialField& initial, const NonlinearityModel& model,
               const SolverConfig& config) {
  config.validate();
  RadialField field = initial;

  std::vector<DiagnosticsRecord> series;
  std::vector<double> checkpoint_times;
  std::vector<RadialField> checkpoint_fields;

  series.push_back(diagnose(field, model, 0.0));
  checkpoint_times.push_back(0.0);
  checkpoint_fields.push_back(field);

  const double initial_gradient = series[0].grad_u_sq + series[0].grad_h_sq;
  const double threshold = initial_gradient > 0.0
                               ? config.blowup_factor * initial_gradient
                               : std::numeric_limits<double>::infinity();

  RunStatus status = RunStatus::Completed;
  double t = 0.0, t_star = 0.0, t_fail = 0.0;
  double dt_current = config.dt;
  long long accepted = 0, rejected = 0, picard_total = 0, halvings = 0;
  int steps_since_record = 0;

  while (t < config.t_end - 1e-9 * config.dt) {
    const double dt_step = std::min(dt_current, config.t_end - t);
    const StepStats stats = step(field, model, dt_step, config);
    picard_total += stats.iterations;

    if (!stats.converged) {
      ++rejected;
      ++halvings;
      dt_current *= 0.5;
      if (dt_current < config.dt_min) {
        // The step cascade collapsed. Distinguish a genuine singularity
        // (gradient functional has crossed the threshold) from a solver
        // failure on an otherwise healthy state.
        const DiagnosticsRecord now = diagnose(field, model, t);
        series.push_back(now);
        if (now.grad_u_sq + now.grad_h_sq >= threshold) {
          status = RunStatus::BlowupDetected;
          t_star = t;
        } else {
          status = RunStatus::IterationFailure;
          t_fail = t;
        }
        break;
      }
      continue;
    }

    t += dt_step;
    ++accepted;
    if (++steps_since_record == config.output_stride) {
      steps_since_record = 0;
      const DiagnosticsRecord record = diagnose(field, model, t);
      series.push_back(record);
      if ((series.size() - 1) % static_cast<std::size_t>(config.checkpoint_stride) == 0) {
        checkpoint_times.push_back(t);
        checkpoint_fields.push_back(field);
      }
      if (record.grad_u_sq + record.grad_h_sq >= threshold) {
        status = RunStatus::BlowupDetected;
        t_star = t;
        break;
      }
    }
  }

  if (status == RunStatus::Completed && steps_since_record != 0)
    series.push_back(diagnose(field, model, t));
  if (checkpoint_times.back() < t) {
    checkpoint_times.push_back(t);
    checkpoint_fields.push_back(field);
  }

  return RunOutcome{.status = status,
                    .t_star = t_star,
                    .t_fail = t_fail,
                    .series = std::move(series),
                    .checkpoint_times = std::move(checkpoint_times),
                    .checkpoint_fields = std::move(checkpoint_fields),
                    .final_field = std::move(field),
                    .t_final = t,
                    .steps_accepted = accepted,
                    .steps_rejected = rejected,
                    .picard_total = picard_total,
                    .dt_halvings = halvings,
                    .dt_final = dt_current};
}

bool detect_blowup(std::span<const DiagnosticsRecord> series, const SolverConfig& config) {
  if (series.empty()) return false;
  const double base = series[0].grad_u_sq + series[0].grad_h_sq;
  if (!(base > 0.0)) return false;
  for (const DiagnosticsRecord& rec : series)
    if (rec.grad_u_sq + rec.grad_h_sq >= config.blowup_factor * base) return true;
  return false;
}

} // namespace qnls
