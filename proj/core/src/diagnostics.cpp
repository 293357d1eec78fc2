#include <qnls/diagnostics.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qnls {

namespace {

// Right side of the momentum-derivative identity, assembled from one record.
double momentum_rhs(const DiagnosticsRecord& rec) {
  const double n = rec.dimension;
  const double g = rec.g1_int - rec.g2_int;
  return -2.0 * rec.grad_u_sq - (n + 2.0) * rec.quasi_p_int - 2.0 * n * rec.quasi_q_int +
         n * (rec.f_rho_int - g) - rec.crit_weight * n * rec.crit_virial_int;
}

// Sum of the magnitudes of the same terms, used as the comparison scale.
double momentum_rhs_scale(const DiagnosticsRecord& rec) {
  const double n = rec.dimension;
  return 2.0 * std::abs(rec.grad_u_sq) + (n + 2.0) * std::abs(rec.quasi_p_int) +
         2.0 * n * std::abs(rec.quasi_q_int) + n * std::abs(rec.f_rho_int) +
         n * (std::abs(rec.g1_int) + std::abs(rec.g2_int)) +
         n * std::abs(rec.crit_weight * rec.crit_virial_int);
}

double trapezoid(std::span<const double> t, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) acc += 0.5 * (t[i + 1] - t[i]) * (v[i] + v[i + 1]);
  return acc;
}

// Time integral of g(t) = t^(2-mu) v(t) across sample points, with the first
// cell treated exactly in the weight when it starts at t = 0 (v frozen at
// the right endpoint), so integrable endpoint singularities are admitted.
double weighted_time_integral(std::span<const double> t, std::span<const double> v, double mu) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i] == 0.0) {
      acc += v[i + 1] * std::pow(t[i + 1], 3.0 - mu) / (3.0 - mu);
    } else {
      const double gi = std::pow(t[i], 2.0 - mu) * v[i];
      const double gj = std::pow(t[i + 1], 2.0 - mu) * v[i + 1];
      acc += 0.5 * (t[i + 1] - t[i]) * (gi + gj);
    }
  }
  return acc;
}

// Pointwise density of Psi on the nodes of a stored field.
std::vector<double> psi_density(const RadialField& field, const NonlinearityModel& model) {
  const RadialGrid& grid = field.grid();
  const auto u = field.values();
  const std::size_t m = u.size();
  std::vector<double> h_shift(m), density(m);
  for (std::size_t j = 0; j < m; ++j) h_shift[j] = model.eval_h(std::norm(u[j])) - model.h0();
  std::vector<double> dh(m);
  grid.radial_derivative(h_shift, dh);
  const double crit_share = model.coupling() / model.two_star();
  for (std::size_t j = 0; j < m; ++j) {
    const double rho = std::norm(u[j]);
    density[j] = dh[j] * dh[j] + std::abs(model.eval_G(rho, GPart::G1)) +
                 model.eval_G(rho, GPart::G2) + crit_share * model.hcrit_renorm(rho);
  }
  return density;
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

} // namespace

DiagnosticsRecord diagnose(const RadialField& field, const NonlinearityModel& model, double t) {
  const RadialGrid& grid = field.grid();
  const auto u = field.values();
  const std::size_t m = u.size();
  const int dim = model.dimension();
  const double crit_share = model.coupling() / model.two_star();
  const double sf = model.sign_factor();

  for (const Complex& z : u) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::domain_error("diagnose: field contains non-finite values");
  }

  std::vector<double> rho(m), mag(m), h_shift(m);
  for (std::size_t j = 0; j < m; ++j) {
    rho[j] = std::norm(u[j]);
    mag[j] = std::abs(u[j]);
    h_shift[j] = model.eval_h(rho[j]) - model.h0();
  }

  DiagnosticsRecord rec;
  rec.t = t;
  rec.dimension = dim;
  rec.crit_weight = sf * model.coupling();

  const auto w = grid.weights();
  const auto r = grid.nodes();
  double mass = 0.0, variance = 0.0;
  double g1 = 0.0, g1_abs = 0.0, g2 = 0.0, hcrit = 0.0, f_rho = 0.0;
  double crit_theta = 0.0, crit_virial = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    mass += w[j] * rho[j];
    variance += w[j] * r[j] * r[j] * rho[j];
    const double g1j = model.eval_G(rho[j], GPart::G1);
    g1 += w[j] * g1j;
    g1_abs += w[j] * std::abs(g1j);
    g2 += w[j] * model.eval_G(rho[j], GPart::G2);
    hcrit += w[j] * model.hcrit_renorm(rho[j]);
    f_rho += w[j] * rho[j] * model.eval_F(rho[j]);
    crit_theta += w[j] * model.crit_theta_integrand(rho[j]);
    crit_virial += w[j] * model.crit_virial_integrand(rho[j]);
  }
  rec.mass = mass;
  rec.variance = variance;
  rec.g1_int = g1;
  rec.g1_abs_int = g1_abs;
  rec.g2_int = g2;
  rec.hcrit_int = hcrit;
  rec.f_rho_int = f_rho;
  rec.crit_theta_int = crit_theta;
  rec.crit_virial_int = crit_virial;
  rec.wall_ratio = (mass > 0.0 && m > 0) ? w[m - 1] * rho[m - 1] / mass : 0.0;

  std::vector<Complex> lap(m);
  grid.apply_laplacian(u, lap);
  double mom = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    mom += w[j] * r[j] * r[j] * (std::conj(u[j]) * lap[j]).imag();
  rec.momentum = -0.5 * mom;

  rec.grad_u_sq = grid.dirichlet_form(u);
  rec.grad_h_sq = grid.dirichlet_form(h_shift);

  // Quasilinear gradient quadratures in the same face-flux form as the
  // Dirichlet sums above (with the same zero ghost value past the wall), so
  // that for h = sqrt(s) the p-integral coincides with grad_h_sq exactly.
  const auto face = grid.face_coeffs();
  const double area_over_dr = RadialGrid::sphere_area(dim) / grid.dr();
  double quasi_p = 0.0, quasi_q = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double mag_next = (j + 1 < m) ? mag[j + 1] : 0.0;
    const double jump = mag_next - mag[j];
    const double half = 0.5 * (mag[j] + mag_next);
    const double rho_face = half * half;
    quasi_p += face[j] * model.p_coeff(rho_face) * jump * jump;
    quasi_q += face[j] * model.q_coeff(rho_face) * jump * jump;
  }
  rec.quasi_p_int = area_over_dr * quasi_p;
  rec.quasi_q_int = area_over_dr * quasi_q;

  rec.psi_int = rec.grad_h_sq + rec.g1_abs_int + rec.g2_int + crit_share * rec.hcrit_int;
  rec.energy = 0.5 * (rec.grad_u_sq + rec.grad_h_sq - (rec.g1_int - rec.g2_int) +
                      sf * crit_share * rec.hcrit_int);
  // theta = dy/dt + 4E assembled from the record itself, so the identity
  // holds exactly for downstream consumers.
  rec.theta = momentum_rhs(rec) + 4.0 * rec.energy;
  rec.pseudo_P = rec.variance + 4.0 * t * rec.momentum + 8.0 * t * t * rec.energy;
  return rec;
}

IdentityReport verify_virial(std::span<const DiagnosticsRecord> series, double tol) {
  require(series.size() >= 3, "verify_virial needs at least three records");
  const double dt = series[1].t - series[0].t;
  require(dt > 0.0, "verify_virial requires increasing record times");
  for (std::size_t i = 0; i + 1 < series.size(); ++i)
    require(std::abs(series[i + 1].t - series[i].t - dt) <= 1e-9 * dt,
            "verify_virial requires uniformly spaced records");

  IdentityReport report;
  report.tolerance = tol;
  for (const DiagnosticsRecord& rec : series)
    report.variance_scale = std::max(report.variance_scale, std::abs(rec.variance));
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    const double dj = (series[i + 1].variance - series[i - 1].variance) / (2.0 * dt);
    report.variance_defect = std::max(report.variance_defect, std::abs(dj + 4.0 * series[i].momentum));
    const double dy = (series[i + 1].momentum - series[i - 1].momentum) / (2.0 * dt);
    report.momentum_defect = std::max(report.momentum_defect, std::abs(dy - momentum_rhs(series[i])));
    report.momentum_scale = std::max(report.momentum_scale, momentum_rhs_scale(series[i]));
  }
  report.pass = report.variance_defect <= tol * report.variance_scale &&
                report.momentum_defect <= tol * report.momentum_scale;
  return report;
}

std::vector<double> pseudoconformal_residual(std::span<const DiagnosticsRecord> series) {
  for (const DiagnosticsRecord& rec : series)
    require(rec.crit_weight >= 0.0,
            "pseudoconformal residual requires defocusing or absent critical coupling");
  std::vector<double> residual(series.size(), 0.0);
  if (series.empty()) return residual;

  const double e0 = series[0].energy;
  const auto conserved = [e0](const DiagnosticsRecord& rec) {
    return rec.variance + 4.0 * rec.t * rec.momentum + 8.0 * rec.t * rec.t * e0;
  };
  const double base = conserved(series[0]);
  double integral = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double gi = series[i - 1].t * series[i - 1].theta;
    const double gj = series[i].t * series[i].theta;
    integral += 0.5 * (series[i].t - series[i - 1].t) * (gi + gj);
    residual[i] = conserved(series[i]) - base - 4.0 * integral;
  }
  return residual;
}

WeightSpec WeightSpec::unit() { return WeightSpec{}; }

WeightSpec WeightSpec::power_of_t(double mu) {
  WeightSpec spec;
  spec.kind = Kind::PowerOfT;
  spec.mu = mu;
  return spec;
}

WeightSpec WeightSpec::spatial_profile(double sigma, double theta) {
  WeightSpec spec;
  spec.kind = Kind::SpatialProfile;
  spec.sigma = sigma;
  spec.theta = theta;
  return spec;
}

double morawetz_accumulate(std::span<const DiagnosticsRecord> series, const WeightSpec& weight) {
  require(weight.kind != WeightSpec::Kind::SpatialProfile,
          "spatial-profile weight needs stored fields; use the checkpoint overload");
  require(series.size() >= 2, "accumulation needs at least two records");
  std::vector<double> t(series.size()), v(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    t[i] = series[i].t;
    v[i] = series[i].psi_int;
  }
  if (weight.kind == WeightSpec::Kind::Unit) return trapezoid(t, v);
  require(weight.mu < 3.0, "time-weight exponent must satisfy mu < 3");
  return weighted_time_integral(t, v, weight.mu);
}

double morawetz_accumulate(std::span<const double> checkpoint_times,
                           std::span<const RadialField> checkpoint_fields,
                           const NonlinearityModel& model,
                           const WeightSpec& weight) {
  require(checkpoint_times.size() == checkpoint_fields.size(),
          "checkpoint times and fields must align");
  require(checkpoint_times.size() >= 2, "checkpointed accumulation needs at least two stored fields");
  if (weight.kind == WeightSpec::Kind::SpatialProfile)
    require(weight.theta > 0.0 && weight.theta <= 1.0, "profile exponent theta must lie in (0,1]");
  if (weight.kind == WeightSpec::Kind::PowerOfT)
    require(weight.mu < 3.0, "time-weight exponent must satisfy mu < 3");

  std::vector<double> spatial(checkpoint_fields.size(), 0.0);
  for (std::size_t k = 0; k < checkpoint_fields.size(); ++k) {
    const RadialField& field = checkpoint_fields[k];
    const std::vector<double> density = psi_density(field, model);
    const auto w = field.grid().weights();
    const auto r = field.grid().nodes();
    double acc = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j) {
      if (weight.kind == WeightSpec::Kind::SpatialProfile) {
        acc += w[j] * std::pow(density[j], weight.theta) * std::pow(1.0 + r[j], -weight.sigma);
      } else {
        acc += w[j] * density[j];
      }
    }
    spatial[k] = acc;
  }
  if (weight.kind == WeightSpec::Kind::PowerOfT)
    return weighted_time_integral(checkpoint_times, spatial, weight.mu);
  return trapezoid(checkpoint_times, spatial);
}

std::pair<double, double> spacetime_norms(std::span<const DiagnosticsRecord> series,
                                          double p, double q, double r) {
  require(p > 0.0 && q > 0.0 && r > 0.0, "spacetime norm exponents must be positive");
  require(r == 1.0, "spatial norm exponent r != 1 needs stored fields; use the checkpoint overload");
  require(series.size() >= 2, "spacetime norms need at least two records");
  std::vector<double> t(series.size()), vp(series.size()), vq(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    t[i] = series[i].t;
    vp[i] = std::pow(series[i].psi_int, p);
    vq[i] = std::pow(series[i].g1_abs_int, q);
  }
  return {std::pow(trapezoid(t, vp), 1.0 / p), std::pow(trapezoid(t, vq), 1.0 / q)};
}

std::pair<double, double> spacetime_norms(std::span<const DiagnosticsRecord> series,
                                          std::span<const double> checkpoint_times,
                                          std::span<const RadialField> checkpoint_fields,
                                          const NonlinearityModel& model,
                                          double p, double q, double r) {
  require(p > 0.0 && q > 0.0 && r > 0.0, "spacetime norm exponents must be positive");
  require(series.size() >= 2, "spacetime norms need at least two records");
  require(checkpoint_times.size() == checkpoint_fields.size(),
          "checkpoint times and fields must align");
  require(checkpoint_times.size() >= 2, "spatial r-norms need at least two stored fields");

  std::vector<double> t(series.size()), vp(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    t[i] = series[i].t;
    vp[i] = std::pow(series[i].psi_int, p);
  }
  const double first = std::pow(trapezoid(t, vp), 1.0 / p);

  std::vector<double> vq(checkpoint_fields.size(), 0.0);
  for (std::size_t k = 0; k < checkpoint_fields.size(); ++k) {
    const RadialField& field = checkpoint_fields[k];
    const auto u = field.values();
    const auto w = field.grid().weights();
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
      acc += w[j] * std::pow(std::abs(model.eval_G(std::norm(u[j]), GPart::G1)), r);
    vq[k] = std::pow(acc, q / r);
  }
  const double second = std::pow(trapezoid(checkpoint_times, vq), 1.0 / q);
  return {first, second};
}

double decay_fit(std::span<const DiagnosticsRecord> series, double t_min) {
  require(t_min >= 1.0, "decay fit requires t_min >= 1");
  std::vector<double> xs, ys;
  for (const DiagnosticsRecord& rec : series) {
    if (rec.t >= t_min && rec.psi_int > 0.0) {
      xs.push_back(std::log(rec.t));
      ys.push_back(std::log(rec.psi_int));
    }
  }
  require(xs.size() >= 10, "decay fit needs at least ten usable records");
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= xs.size();
  mean_y /= ys.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  require(sxx > 0.0, "decay fit needs records at distinct times");
  return sxy / sxx;
}

DecayCheck check_pointwise_decay(std::span<const DiagnosticsRecord> series,
                                 double coeff_quadratic,
                                 double coeff_slow,
                                 double loss_exponent) {
  DecayCheck result;
  for (const DiagnosticsRecord& rec : series) {
    if (rec.t < 1.0) continue;
    const double rhs = coeff_quadratic / (rec.t * rec.t) +
                       (coeff_slow != 0.0
                            ? coeff_slow / std::pow(rec.t, 2.0 - loss_exponent)
                            : 0.0);
    ++result.checked;
    if (rec.psi_int > rhs) ++result.violations;
    if (rhs > 0.0) result.worst_ratio = std::max(result.worst_ratio, rec.psi_int / rhs);
  }
  return result;
}

} // namespace qnls
