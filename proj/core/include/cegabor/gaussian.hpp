#pragma once

#include <complex>
#include <vector>

#include "cegabor/lattice.hpp"

namespace cegabor {

// phi_alpha(x) = exp(-alpha |x|^2)
class GaussianWindow {
 public:
  GaussianWindow(double alpha, int dim);

  double alpha() const { return alpha_; }
  int dim() const { return dim_; }
  double operator()(const Vector& x) const;
  double norm_sq() const;                       // (pi / 2 alpha)^{n/2}
  double fourier(const Vector& xi) const;       // psi_alpha(xi) = (pi/alpha)^{n/2} exp(-pi^2 |xi|^2 / alpha)

 private:
  double alpha_;
  int dim_;
};

struct TimeFrequencyPoint {
  Vector u;  // translation
  Vector v;  // modulation

  Vector stacked() const;
  static TimeFrequencyPoint from_stacked(const Vector& z);
};

// Integral of phi(x) phi(x - u) exp(2 pi i <x, v>) dx for phi = phi_alpha.
std::complex<double> gabor_inner_product(double alpha, const TimeFrequencyPoint& z);
double gabor_correlation_modulus(double alpha, const Vector& lambda);

struct CorrelationResult {
  double value = 0;
  Vector argmax;
  double radius = 0;
};

// Max of |<phi_alpha, pi_lambda phi_alpha>| over nonzero lambda in a 2n-dimensional lattice.
// radius <= 0 starts from 3x the first reduced basis vector.
CorrelationResult correlation(double alpha, const Lattice& lattice, double radius = 0);

double c_l_sigma(const Lattice& lattice, double sigma);
double c_l_sigma_critical_bound(int n, double dual_covolume, double sigma);
double c_sigma_periodic(const PeriodicSet& set, double sigma);

// (T_l phi_alpha * psi_beta)(x)
double gaussian_convolution(double alpha, double beta, const Vector& shift, const Vector& x);

double kappa(double n, double xi, double beta, double sigma);

struct GrassmannianReport {
  std::vector<double> correlations;
  std::vector<double> scaled_shortest_lengths;
  std::size_t argmin_correlation = 0;
  std::size_t argmax_length = 0;
  std::size_t selected = 0;
};

GrassmannianReport grassmannian_scan(double alpha, const std::vector<Lattice>& family);

}  // namespace cegabor
