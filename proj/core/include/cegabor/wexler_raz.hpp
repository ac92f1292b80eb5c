#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "cegabor/lattice.hpp"
#include "cegabor/multiplicity.hpp"

namespace cegabor {

enum class WindowKind { gaussian, truncated_gaussian, hat };

// Window normalized so that sum_k w(x - C k) is approximately (exactly, for the hat) |det C|^{-1/2}.
class Window {
 public:
  static Window gaussian(double alpha, const Matrix& c);
  static Window truncated_gaussian(double alpha, const Matrix& c, int omega);
  static Window hat(const Matrix& c);

  WindowKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  int omega() const { return omega_; }
  int dim() const { return static_cast<int>(c_.cols()); }
  double prefactor() const { return prefactor_; }
  double operator()(const Vector& x) const;
  // Euclidean radius outside of which the window is zero or below 1e-16 of its peak.
  double reach() const;

 private:
  Window(WindowKind kind, double alpha, int omega, Matrix c);

  WindowKind kind_;
  double alpha_ = 0;
  int omega_ = 0;
  Matrix c_;
  Matrix c_inv_;
  double prefactor_ = 1;
};

struct NormCondition {
  bool pass = false;
  double norm = 0;
  double bound = 0;
  double margin = 0;  // bound - norm
};

NormCondition chrkim_norm_condition(const Matrix& c, const Matrix& b, int omega);

int omega_for_epsilon(double alpha, double epsilon, int dim);

class DualWindow {
 public:
  DualWindow(Window base, Matrix c, Matrix b, MultiplicityMap multiplicities, std::optional<double> epsilon = {});

  const Window& base() const { return base_; }
  const Matrix& c() const { return c_; }
  const Matrix& b() const { return b_; }
  double alpha() const { return base_.alpha(); }
  double det_factor() const { return det_factor_; }
  bool truncated() const { return base_.kind() == WindowKind::truncated_gaussian; }
  const MultiplicityMap& multiplicities() const { return mu_; }
  const std::optional<double>& epsilon() const { return epsilon_; }
  void set_epsilon(double epsilon) { epsilon_ = epsilon; }

  double operator()(const Vector& x) const;
  // gamma(x) = det_factor * sum_j weight_j * base(x + shift_j)
  const std::vector<std::pair<Vector, double>>& terms() const { return terms_; }
  double reach() const;
  double error_budget() const;

 private:
  Window base_;
  Matrix c_;
  Matrix b_;
  MultiplicityMap mu_;
  std::optional<double> epsilon_;
  double det_factor_;
  std::vector<std::pair<Vector, double>> terms_;
};

DualWindow build_dual_window(const Window& base, const Matrix& c, const Matrix& b, int omega,
                             MultiplicityStrategy strategy);
DualWindow build_dual_window(double alpha, const Matrix& c, const Matrix& b, int omega, MultiplicityStrategy strategy,
                             bool truncated);

double error_budget(double epsilon, double det_factor, const MultiplicityMap& mu);

struct PartitionOfUnityReport {
  double max_residual = 0;
  double bound = 0;
  double max_law_deviation = 0;     // |sum - first-harmonic law|
  double max_series_deviation = 0;  // |sum - full Fourier series|
  std::size_t grid_points = 0;
};

double partition_sum(double alpha, const Vector& spacing, const Vector& t);
double partition_first_harmonic(double alpha, const Vector& spacing, const Vector& t);
double partition_fourier_series(double alpha, const Vector& spacing, const Vector& t);
PartitionOfUnityReport partition_of_unity_residual(double alpha, const Vector& spacing, int points_per_period);

struct WrIdentityReport {
  double max_residual = 0;
  Vector worst_shift;
  std::size_t grid_points = 0;
  std::size_t shifts = 0;
};

WrIdentityReport wr_identity_residual(const Window& phi, const DualWindow& gamma, const Matrix& c, const Matrix& b,
                                      int points_per_dim);

struct BiorthogonalityReport {
  double max_residual = 0;
  double diagonal_error = 0;
  double max_offdiagonal = 0;
  Vector worst;
  std::size_t points = 0;
  double radius = 0;
};

// <gamma, pi_lambda phi> for Gaussian windows, closed form (full) or separable quadrature (truncated).
std::complex<double> dual_inner_product(const DualWindow& gamma, const Vector& time, const Vector& frequency);

BiorthogonalityReport biorthogonality_residual(const DualWindow& gamma, const ProductLattice& lattice,
                                               double radius = 0);

}  // namespace cegabor
