#include "qnls/radial_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnls {

RadialGrid::RadialGrid(int dimension, double r_max, int node_count)
    : dimension_(dimension), r_max_(r_max) {
  if (dimension < 3) throw std::invalid_argument("grid dimension must be at least 3");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw std::invalid_argument("grid r_max must be positive and finite");
  }
  if (node_count < 8) throw std::invalid_argument("grid needs at least 8 nodes");

  const int m = node_count;
  dr_ = r_max / m;
  nodes_.resize(m);
  weights_.resize(m);
  face_.resize(m);
  lap_lower_.resize(m);
  lap_diag_.resize(m);
  lap_upper_.resize(m);

  const double area = sphere_area(dimension);
  double prefix = 0.0;  // sum_{i<=j} r_i^(N-1)
  for (int j = 0; j < m; ++j) {
    nodes_[j] = (j + 0.5) * dr_;
    const double rpow = std::pow(nodes_[j], dimension - 1);
    weights_[j] = area * rpow * dr_;
    prefix += rpow;
    face_[j] = dimension * dr_ * prefix / ((j + 1) * dr_);
  }
  for (int j = 0; j < m; ++j) {
    const double inv = 1.0 / (std::pow(nodes_[j], dimension - 1) * dr_ * dr_);
    const double c_lo = j > 0 ? face_[j - 1] : 0.0;
    const double c_hi = face_[j];
    lap_lower_[j] = c_lo * inv;
    lap_upper_[j] = c_hi * inv;
    lap_diag_[j] = -(c_lo + c_hi) * inv;
  }
}

double RadialGrid::integrate(std::span<const double> f) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += weights_[j] * f[j];
  return acc;
}

double RadialGrid::weighted_norm_sq(std::span<const Complex> f) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += weights_[j] * std::norm(f[j]);
  return acc;
}

template <typename T>
static void apply_lap(const std::vector<double>& lo, const std::vector<double>& di,
                      const std::vector<double>& up, std::span<const T> f, std::span<T> out) {
  const std::size_t m = f.size();
  for (std::size_t j = 0; j < m; ++j) {
    T acc = di[j] * f[j];
    if (j > 0) acc += lo[j] * f[j - 1];
    if (j + 1 < m) acc += up[j] * f[j + 1];  // ghost beyond the wall is zero
    out[j] = acc;
  }
}

void RadialGrid::apply_laplacian(std::span<const Complex> f, std::span<Complex> out) const {
  apply_lap(lap_lower_, lap_diag_, lap_upper_, f, out);
}

void RadialGrid::apply_laplacian(std::span<const double> f, std::span<double> out) const {
  apply_lap(lap_lower_, lap_diag_, lap_upper_, f, out);
}

double RadialGrid::dirichlet_form(std::span<const Complex> f) const {
  const std::size_t m = f.size();
  const double area = sphere_area(dimension_);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const Complex jump = (j + 1 < m ? f[j + 1] : Complex{}) - f[j];
    acc += face_[j] * std::norm(jump);
  }
  return area * acc / dr_;
}

double RadialGrid::dirichlet_form(std::span<const double> f) const {
  const std::size_t m = f.size();
  const double area = sphere_area(dimension_);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double jump = (j + 1 < m ? f[j + 1] : 0.0) - f[j];
    acc += face_[j] * jump * jump;
  }
  return area * acc / dr_;
}

void RadialGrid::radial_derivative(std::span<const double> f, std::span<double> out) const {
  const std::size_t m = f.size();
  if (m == 0) return;
  out[0] = m > 1 ? (f[1] - f[0]) / (2.0 * dr_) : 0.0;  // even reflection at the center
  for (std::size_t j = 1; j + 1 < m; ++j) out[j] = (f[j + 1] - f[j - 1]) / (2.0 * dr_);
  if (m > 1) out[m - 1] = (f[m - 1] - f[m - 2]) / dr_;
}

double RadialGrid::sphere_area(int dimension) {
  return 2.0 * std::pow(std::numbers::pi, dimension / 2.0) / std::tgamma(dimension / 2.0);
}

double RadialGrid::unit_ball_volume(int dimension) { return sphere_area(dimension) / dimension; }

double RadialGrid::sobolev_best_constant(int dimension) {
  const double n = dimension;
  const double s = n * (n - 2.0) * std::numbers::pi *
                   std::pow(std::tgamma(n / 2.0) / std::tgamma(n), 2.0 / n);
  return std::pow(s, -n / (n - 2.0));
}

RadialField::RadialField(std::shared_ptr<const RadialGrid> grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("field needs a grid");
  if (static_cast<int>(values_.size()) != grid_->node_count()) {
    throw std::invalid_argument("field size does not match grid");
  }
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("field values must be finite");
    }
  }
}

RadialField make_gaussian(std::shared_ptr<const RadialGrid> grid, double amplitude, double width,
                          double chirp) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  std::vector<Complex> v(grid->node_count());
  for (int j = 0; j < grid->node_count(); ++j) {
    const double r2 = grid->nodes()[j] * grid->nodes()[j];
    const double mag = amplitude * std::exp(-r2 / (width * width));
    v[j] = mag * Complex{std::cos(chirp * r2), std::sin(chirp * r2)};
  }
  return RadialField(std::move(grid), std::move(v));
}

RadialField make_bubble(std::shared_ptr<const RadialGrid> grid, double amplitude, double width,
                        double chirp) {
  if (!(width > 0.0)) throw std::invalid_argument("bubble width must be positive");
  const double n = grid->dimension();
  std::vector<Complex> v(grid->node_count());
  for (int j = 0; j < grid->node_count(); ++j) {
    const double r2 = grid->nodes()[j] * grid->nodes()[j];
    const double mag =
        amplitude * std::pow(1.0 + r2 / (width * width * n * (n - 2.0)), -(n - 2.0) / 2.0);
    v[j] = mag * Complex{std::cos(chirp * r2), std::sin(chirp * r2)};
  }
  return RadialField(std::move(grid), std::move(v));
}

RadialField make_zero(std::shared_ptr<const RadialGrid> grid) {
  std::vector<Complex> v(grid->node_count(), Complex{});
  return RadialField(std::move(grid), std::move(v));
}

}  // namespace qnls
