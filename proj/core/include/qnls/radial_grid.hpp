#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace qnls {

using Complex = std::complex<double>;

/// Uniform cell-centered radial grid for spherically symmetric fields in N
/// dimensions: nodes r_j = (j + 1/2) dr on (0, r_max), with a homogeneous
/// Dirichlet wall at r_max and a natural zero-flux center.
///
/// The discrete Laplacian is in flux form with moment-matched face
/// coefficients
///
///   c_{j+1/2} = N dr (sum_{i<=j} r_i^(N-1)) / ((j+1) dr),
///
/// which makes the operator (a) exactly self-adjoint in the quadrature
/// inner product sum_j w_j f_j conj(g_j), w_j = area(S^(N-1)) r_j^(N-1) dr,
/// (b) exact on constants and on r^2 away from the wall, and (c) second
/// order accurate.  Property (a) is what lets the time stepper conserve the
/// discrete mass to solver tolerance.
class RadialGrid {
 public:
  RadialGrid(int dimension, double r_max, int node_count);

  int dimension() const { return dimension_; }
  double r_max() const { return r_max_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  double dr() const { return dr_; }

  const std::vector<double>& nodes() const { return nodes_; }
  /// Quadrature weights w_j; integrate(f) = sum_j w_j f_j approximates the
  /// integral of a radial function over all of R^N.
  const std::vector<double>& weights() const { return weights_; }
  /// Face coefficients c_{j+1/2}, j = 0..node_count()-1; the last entry is
  /// the wall face.  The center face c_{-1/2} is identically zero.
  const std::vector<double>& face_coeffs() const { return face_; }

  /// Tridiagonal rows of the Laplacian (lower/diag/upper), ghost value zero
  /// beyond the wall.
  const std::vector<double>& lap_lower() const { return lap_lower_; }
  const std::vector<double>& lap_diag() const { return lap_diag_; }
  const std::vector<double>& lap_upper() const { return lap_upper_; }

  double integrate(std::span<const double> f) const;
  /// sum_j w_j |f_j|^2.
  double weighted_norm_sq(std::span<const Complex> f) const;

  void apply_laplacian(std::span<const Complex> f, std::span<Complex> out) const;
  void apply_laplacian(std::span<const double> f, std::span<double> out) const;

  /// Dirichlet form -Re<Lap f, f>_w = integral of |grad f|^2, evaluated in
  /// flux form so it is exactly the quadratic form of the operator.
  /// Assumes the field decays to the ghost value zero at the wall.
  double dirichlet_form(std::span<const Complex> f) const;
  double dirichlet_form(std::span<const double> f) const;

  /// Nodal radial derivative: centered in the interior, even reflection at
  /// the center, one-sided at the wall.  Used for weighted gradient
  /// integrals whose weights vary with the field.
  void radial_derivative(std::span<const double> f, std::span<double> out) const;

  /// Surface area of the unit sphere S^(N-1).
  static double sphere_area(int dimension);
  static double unit_ball_volume(int dimension);
  /// Best constant C_s in |u|_{2*}^{2*} <= C_s |grad u|_2^{2*} on R^N,
  /// from the closed form of the optimal Sobolev constant.
  static double sobolev_best_constant(int dimension);

 private:
  int dimension_;
  double r_max_;
  double dr_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> face_;
  std::vector<double> lap_lower_, lap_diag_, lap_upper_;
};

/// A complex radial field bound to its grid.
class RadialField {
 public:
  RadialField(std::shared_ptr<const RadialGrid> grid, std::vector<Complex> values);

  const RadialGrid& grid() const { return *grid_; }
  std::shared_ptr<const RadialGrid> grid_ptr() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

 private:
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<Complex> values_;
};

/// amplitude * exp(-r^2/width^2) * exp(i chirp r^2).
RadialField make_gaussian(std::shared_ptr<const RadialGrid> grid, double amplitude, double width,
                          double chirp = 0.0);
/// amplitude * (1 + (r/width)^2 / (N(N-2)))^(-(N-2)/2) * exp(i chirp r^2),
/// the extremal profile of the Sobolev inequality.
RadialField make_bubble(std::shared_ptr<const RadialGrid> grid, double amplitude, double width,
                        double chirp = 0.0);
RadialField make_zero(std::shared_ptr<const RadialGrid> grid);

}  // namespace qnls
