#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "cegabor/error.hpp"
#include "cegabor/gaussian.hpp"
#include "cegabor/quadrature.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace cegabor {
namespace {

using testing::Gen;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

ComplexIntegrand gaussian(double alpha) {
  return [alpha](const Vector& x) { return cd(std::exp(-alpha * x.squaredNorm())); };
}

TEST(GaussianWindow, NormSquaredMatchesQuadrature) {
  for (int n = 1; n <= 2; ++n) {
    const GaussianWindow w(0.7, n);
    const auto sq = [&](const Vector& x) { return cd(w(x) * w(x)); };
    const auto q = integrate_box(sq, gaussian_box(Vector::Zero(n), 2 * 0.7));
    EXPECT_NEAR(q.value.real(), w.norm_sq(), 1e-10);
    EXPECT_NEAR(w.norm_sq(), std::pow(pi / 1.4, n / 2.0), 1e-15);
  }
}

TEST(GaussianWindow, RejectsNonpositiveAlpha) { EXPECT_THROW(GaussianWindow(0, 1), Error); }

TEST(GaborInnerProduct, AtOriginIsNormSquared) {
  for (int n = 1; n <= 3; ++n) {
    const TimeFrequencyPoint z{Vector::Zero(n), Vector::Zero(n)};
    EXPECT_NEAR(std::abs(gabor_inner_product(1.3, z) - cd(std::pow(pi / 2.6, n / 2.0))), 0, 1e-15);
  }
}

TEST(GaborInnerProduct, UnitShiftAtPi) {
  const TimeFrequencyPoint z{Vector::Constant(1, 1), Vector::Zero(1)};
  EXPECT_NEAR(std::abs(gabor_inner_product(pi, z)), std::sqrt(0.5) * std::exp(-pi / 2), 1e-15);
}

TEST(GaborInnerProduct, MatchesQuadratureOfDefiningIntegral) {
  Gen gen(101);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const double alpha = gen.uniform(0.4, 3.0);
    const TimeFrequencyPoint z{gen.vector(n, -1.5, 1.5), gen.vector(n, -1.0, 1.0)};
    const cd closed = gabor_inner_product(alpha, z);
    // The STFT carries the conjugate phase of the displayed integral.
    const cd q = stft_quadrature(gaussian(alpha), gaussian(alpha), z.u, z.v,
                                 gaussian_box(0.5 * z.u, alpha, 1e-20));
    EXPECT_LE(std::abs(std::conj(q) - closed), 1e-8 * std::abs(closed) + 1e-14) << "draw " << t;
  }
}

TEST(GaborInnerProduct, ModulusDependsOnlyOnScaledNorm) {
  Gen gen(7);
  for (int t = 0; t < 20; ++t) {
    const double alpha = gen.uniform(0.3, 4);
    const Vector u = gen.vector(2, -1, 1), v = gen.vector(2, -1, 1);
    const double inv = u.squaredNorm() + std::pow(pi / alpha, 2) * v.squaredNorm();
    // Second point with the same invariant, rotated and reweighted.
    const double share = gen.uniform(0, 1);
    const double theta = gen.uniform(0, 2 * pi);
    Vector u2(2), v2(2);
    u2 << std::sqrt(share * inv) * std::cos(theta), std::sqrt(share * inv) * std::sin(theta);
    v2 << (alpha / pi) * std::sqrt((1 - share) * inv), 0;
    const double m1 = std::abs(gabor_inner_product(alpha, {u, v}));
    const double m2 = std::abs(gabor_inner_product(alpha, {u2, v2}));
    EXPECT_NEAR(m1, m2, 1e-12 * std::max(1.0, m1));
  }
}

TEST(Stft, WindowAgainstItselfAtOrigin) {
  const double alpha = 0.9;
  const cd q = stft_quadrature(gaussian(alpha), gaussian(alpha), Vector::Zero(1), Vector::Zero(1),
                               gaussian_box(Vector::Zero(1), alpha));
  EXPECT_NEAR(q.real(), GaussianWindow(alpha, 1).norm_sq(), 1e-10);
  EXPECT_NEAR(q.imag(), 0, 1e-14);
}

TEST(Stft, CovarianceIdentity) {
  Gen gen(55);
  const double alpha = 1.1;
  const auto phi = gaussian(alpha);
  const auto f = [](const Vector& x) { return cd(x(0), 0.5) * std::exp(-1.3 * std::pow(x(0) - 0.2, 2)); };
  for (int t = 0; t < 10; ++t) {
    const double xi = gen.uniform(-1, 1), eta = gen.uniform(-1, 1);
    const Vector u = gen.vector(1, -1, 1), v = gen.vector(1, -1, 1);
    const auto shifted = [&](const ComplexIntegrand& g) {
      return ComplexIntegrand([=](const Vector& x) {
        return std::polar(1.0, 2 * pi * eta * x(0)) * g(x - Vector::Constant(1, xi));
      });
    };
    const Box box{Vector::Constant(1, -9), Vector::Constant(1, 9)};
    const cd lhs = stft_quadrature(shifted(phi), shifted(f), u, v, box);
    const cd rhs = std::polar(1.0, 2 * pi * (u(0) * eta - v(0) * xi)) * stft_quadrature(phi, f, u, v, box);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9) << "sample " << t;
  }
}

TEST(Fourier, GaussianTransformMatchesClosedForm) {
  Gen gen(13);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const double alpha = gen.uniform(0.5, 3);
    const Vector xi = gen.vector(n, -1, 1);
    const cd q = fourier_quadrature(gaussian(alpha), xi, gaussian_box(Vector::Zero(n), alpha, 1e-20));
    const double closed = GaussianWindow(alpha, n).fourier(xi);
    EXPECT_LE(std::abs(q - closed), 1e-8 * closed + 1e-14);
  }
}

TEST(Correlation, IntegerLatticeAtPiAttainedAtShortestVector) {
  const CorrelationResult c = correlation(pi, Lattice::integer(2));
  EXPECT_NEAR(c.value, std::sqrt(0.5) * std::exp(-pi / 2), 1e-15);
  EXPECT_NEAR(c.argmax.norm(), 1, 1e-14);
}

TEST(Correlation, MatchesShortestVectorOfScaledLattice) {
  Gen gen(17);
  for (int t = 0; t < 10; ++t) {
    const double alpha = gen.uniform(0.5, 4);
    const Lattice l = gen.lattice(2);
    const auto sv = testing::brute_force_shortest(scale_frequency_half(l, pi / alpha), 6);
    const double expected = std::sqrt(pi / (2 * alpha)) * std::exp(-alpha * sv.length_sq / 2);
    EXPECT_NEAR(correlation(alpha, l).value, expected, 1e-12);
  }
}

TEST(Correlation, ScalingUpDecreases) {
  const Lattice l = testing::hexagonal();
  double previous = correlation(1.0, l).value;
  for (double s : {1.1, 1.3, 1.7, 2.5}) {
    const double c = correlation(1.0, l.scaled(s)).value;
    EXPECT_LT(c, previous);
    previous = c;
  }
}

TEST(CLSigma, IntegerLattice) {
  EXPECT_NEAR(c_l_sigma(Lattice::integer(1), 1), std::exp(-pi * pi / 4), 1e-15);
  EXPECT_GT(c_l_sigma(Lattice::integer(1), 1e8), 1 - 1e-6);
}

TEST(CLSigma, CriticalBound) {
  // L with hexagonal dual of covolume 1.
  const Lattice l = dual(testing::hexagonal());
  for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
    EXPECT_LE(c_l_sigma(l, sigma), c_l_sigma_critical_bound(2, 1.0, sigma));
  }
  const Lattice e8 = testing::root_lattice("E8");
  EXPECT_LE(c_l_sigma(e8, 1.0), c_l_sigma_critical_bound(8, 1.0, 1.0));
}

TEST(CSigmaPeriodic, SingleTranslationReducesToLattice) {
  Gen gen(4);
  const Lattice l = gen.lattice(2);
  EXPECT_NEAR(c_sigma_periodic(PeriodicSet(l, {Vector::Zero(2)}), 0.8), c_l_sigma(l, 0.8), 1e-14);
}

TEST(CSigmaPeriodic, HalfIntegers) {
  const PeriodicSet s(Lattice::integer(1), {Vector::Zero(1), Vector::Constant(1, 0.5)});
  for (double sigma : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(c_sigma_periodic(s, sigma), std::exp(-pi * pi / (16 * sigma)), 1e-14);
    EXPECT_LE(c_sigma_periodic(s, sigma), std::exp(-pi / (8 * sigma * std::numbers::e)));
  }
}

TEST(GaussianConvolution, SmallBetaLimit) {
  const Vector l = Vector::Constant(1, 0.3), x = Vector::Constant(1, -0.4);
  EXPECT_NEAR(gaussian_convolution(1.2, 1e-10, l, x), std::exp(-1.2 * 0.49), 1e-9);
}

TEST(GaussianConvolution, UnitParameters) {
  EXPECT_NEAR(gaussian_convolution(1, 1, Vector::Zero(1), Vector::Zero(1)), std::sqrt(pi * pi / (1 + pi * pi)),
              1e-15);
}

TEST(GaussianConvolution, MatchesQuadrature) {
  Gen gen(23);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const double alpha = gen.uniform(0.5, 3), beta = gen.uniform(0.5, 4);
    const Vector l = gen.vector(n, -1, 1), x = gen.vector(n, -1, 1);
    const auto integrand = [&](const Vector& y) {
      const double psi = std::pow(pi / beta, n / 2.0) * std::exp(-pi * pi * (x - y).squaredNorm() / beta);
      return cd(std::exp(-alpha * (y - l).squaredNorm()) * psi);
    };
    const cd q = integrate_box(integrand, gaussian_box(l, alpha, 1e-20)).value;
    const double closed = gaussian_convolution(alpha, beta, l, x);
    EXPECT_LE(std::abs(q.real() - closed), 1e-8 * closed + 1e-13);
  }
}

TEST(GaussianConvolution, RatioMonotoneInDistance) {
  const double alpha = 1.3, beta = 2.4;
  const Vector l = Vector::Constant(2, 0.2);
  double previous = 0;
  for (int i = 0; i <= 60; ++i) {
    Vector x = l;
    x(0) += 0.05 * i;
    const double ratio = gaussian_convolution(alpha, beta, l, x) / std::exp(-alpha * (x - l).squaredNorm());
    EXPECT_GE(ratio, previous * (1 - 1e-12));
    previous = ratio;
  }
}

TEST(Kappa, Examples) {
  const double n = 2 * pi * std::numbers::e;
  EXPECT_NEAR(kappa(n, 1, 1, 1), std::exp(-1.0), 1e-15);
  EXPECT_GT(kappa(2, 1, 1, 1), kappa(2, 1, 1, 1.5));
  EXPECT_GT(kappa(2, 1, 1, 1), kappa(2, 1, 1.5, 1));
  EXPECT_GT(kappa(2, 1, 1, 1), kappa(2, 1.5, 1, 1));
}

TEST(Kappa, EstimateHoldsInAdmissibleRange) {
  for (int n = 1; n <= 2; ++n) {
    const double sigma = 1.0, xi = 1.0, beta = pi * pi / (4 * sigma);
    // Largest alpha with log(1 + beta alpha / pi^2) <= sigma beta xi^{1/2n} / (pi e).
    const double alpha_max = (std::exp(sigma * beta * std::pow(xi, 0.5 / n) / (pi * std::numbers::e)) - 1) *
                             pi * pi / beta;
    for (double alpha : {0.25 * alpha_max, 0.6 * alpha_max, alpha_max}) {
      const double k = kappa(n, xi, beta, sigma);
      const Vector l = Vector::Constant(n, 0.5);
      for (int i = 0; i <= 40; ++i) {
        Vector x = l;
        x(0) += 0.1 * i - 2;
        EXPECT_GE(gaussian_convolution(alpha, beta, l, x), k * std::exp(-alpha * (x - l).squaredNorm()) * (1 - 1e-12));
      }
    }
  }
}

std::vector<Lattice> rectangular_family() {
  std::vector<Lattice> family;
  for (int i = 0; i < 10; ++i) {
    const double t = 0.5 + 0.1 * i;
    Matrix b = Matrix::Zero(2, 2);
    b(0, 0) = t;
    b(1, 1) = 1 / t;
    family.emplace_back(b);
  }
  return family;
}

TEST(Grassmannian, RectangularFamilyPicksSquare) {
  const auto family = rectangular_family();
  const GrassmannianReport r = grassmannian_scan(pi, family);
  EXPECT_EQ(r.argmin_correlation, 5u);
  EXPECT_EQ(r.argmax_length, 5u);
  EXPECT_EQ(r.selected, 5u);
}

TEST(Grassmannian, SingleLattice) {
  const GrassmannianReport r = grassmannian_scan(pi, {Lattice::integer(2)});
  EXPECT_EQ(r.selected, 0u);
}

TEST(Grassmannian, OrderInvariant) {
  auto family = rectangular_family();
  Gen gen(31);
  std::shuffle(family.begin(), family.end(), gen.engine());
  const GrassmannianReport r = grassmannian_scan(pi, family);
  EXPECT_NEAR(family[r.selected].basis()(0, 0), 1.0, 1e-12);
}

TEST(Grassmannian, MixedCovolumesRejected) {
  try {
    grassmannian_scan(pi, {Lattice::integer(2), Lattice::integer(2).scaled(2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
}

}  // namespace
}  // namespace cegabor
