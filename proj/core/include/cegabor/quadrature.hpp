#pragma once

#include <complex>
#include <functional>

#include "cegabor/types.hpp"

namespace cegabor {

using ComplexIntegrand = std::function<std::complex<double>(const Vector&)>;

struct Box {
  Vector lower;
  Vector upper;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  unsigned max_depth = 15;
};

struct QuadratureResult {
  std::complex<double> value;
  double error = 0;
};

// Box around center outside of which exp(-decay |x - center|^2) < tail.
Box gaussian_box(const Vector& center, double decay, double tail = 1e-18);

// Nested adaptive Gauss-Kronrod over a box; throws quadrature_budget when the tolerance is missed.
QuadratureResult integrate_box(const ComplexIntegrand& f, const Box& box, const QuadratureOptions& options = {});

// V_g f(u, v) = integral f(x) conj(g(x - u)) exp(-2 pi i <v, x>) dx
std::complex<double> stft_quadrature(const ComplexIntegrand& window, const ComplexIntegrand& f, const Vector& u,
                                     const Vector& v, const Box& box, const QuadratureOptions& options = {});

// integral f(x) exp(-2 pi i <x, xi>) dx
std::complex<double> fourier_quadrature(const ComplexIntegrand& f, const Vector& xi, const Box& box,
                                        const QuadratureOptions& options = {});

}  // namespace cegabor
