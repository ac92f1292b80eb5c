#include "cegabor/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "cegabor/error.hpp"

namespace cegabor {

namespace {

using Complex = std::complex<double>;
using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Nested {
  const ComplexIntegrand& f;
  const Box& box;
  const QuadratureOptions& options;
  Vector point;
  double worst_error = 0;

  Complex level(Eigen::Index k) {
    auto inner = [&](double t) -> Complex {
      point(k) = t;
      if (k + 1 == point.size()) return f(point);
      return level(k + 1);
    };
    double error = 0;
    double l1 = 0;
    const Complex value = Rule::integrate(inner, box.lower(k), box.upper(k), options.max_depth, 1e-13, &error, &l1);
    const double allowed = std::max(options.abs_tol, 1e-11 * l1);
    worst_error = std::max(worst_error, error / allowed * options.abs_tol);
    if (!std::isfinite(error) || error > allowed) {
      throw Error(ErrorCode::quadrature_budget, "quadrature tolerance not reached within the depth budget");
    }
    return value;
  }
};

}  // namespace

Box gaussian_box(const Vector& center, double decay, double tail) {
  if (!(decay > 0)) throw Error(ErrorCode::invalid_argument, "decay must be positive");
  const double half = std::sqrt(-std::log(tail) / decay);
  return {center.array() - half, center.array() + half};
}

QuadratureResult integrate_box(const ComplexIntegrand& f, const Box& box, const QuadratureOptions& options) {
  if (box.lower.size() != box.upper.size() || box.lower.size() == 0) {
    throw Error(ErrorCode::dimension, "quadrature box has inconsistent dimension");
  }
  Nested nested{f, box, options, Vector::Zero(box.lower.size())};
  const Complex value = nested.level(0);
  return {value, nested.worst_error};
}

std::complex<double> stft_quadrature(const ComplexIntegrand& window, const ComplexIntegrand& f, const Vector& u,
                                     const Vector& v, const Box& box, const QuadratureOptions& options) {
  auto integrand = [&](const Vector& x) {
    const double phase = -2 * std::numbers::pi * v.dot(x);
    return f(x) * std::conj(window(x - u)) * std::polar(1.0, phase);
  };
  return integrate_box(integrand, box, options).value;
}

std::complex<double> fourier_quadrature(const ComplexIntegrand& f, const Vector& xi, const Box& box,
                                        const QuadratureOptions& options) {
  auto integrand = [&](const Vector& x) { return f(x) * std::polar(1.0, -2 * std::numbers::pi * x.dot(xi)); };
  return integrate_box(integrand, box, options).value;
}

}  // namespace cegabor
