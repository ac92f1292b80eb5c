#include "cegabor/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cegabor/error.hpp"

namespace cegabor {

namespace {

using std::numbers::pi;

void require_positive(double value, const char* name) {
  if (!(value > 0) || !std::isfinite(value)) {
    throw Error(ErrorCode::invalid_argument, std::string(name) + " must be positive and finite");
  }
}

bool lex_less(const Matrix& a, const Matrix& b) {
  const Eigen::Index count = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < count; ++i) {
    // column-major flattening
    if (a.data()[i] != b.data()[i]) return a.data()[i] < b.data()[i];
  }
  return a.size() < b.size();
}

bool lex_greater(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) > b(i);
  }
  return false;
}

}  // namespace

GaussianWindow::GaussianWindow(double alpha, int dim) : alpha_(alpha), dim_(dim) {
  require_positive(alpha, "alpha");
  if (dim < 1) throw Error(ErrorCode::dimension, "dimension must be positive");
}

double GaussianWindow::operator()(const Vector& x) const { return std::exp(-alpha_ * x.squaredNorm()); }

double GaussianWindow::norm_sq() const { return std::pow(pi / (2 * alpha_), dim_ / 2.0); }

double GaussianWindow::fourier(const Vector& xi) const {
  return std::pow(pi / alpha_, dim_ / 2.0) * std::exp(-pi * pi * xi.squaredNorm() / alpha_);
}

Vector TimeFrequencyPoint::stacked() const {
  Vector z(u.size() + v.size());
  z << u, v;
  return z;
}

TimeFrequencyPoint TimeFrequencyPoint::from_stacked(const Vector& z) {
  if (z.size() % 2 != 0) throw Error(ErrorCode::dimension, "time-frequency point needs even dimension");
  const auto n = z.size() / 2;
  return {z.head(n), z.tail(n)};
}

std::complex<double> gabor_inner_product(double alpha, const TimeFrequencyPoint& z) {
  require_positive(alpha, "alpha");
  if (z.u.size() != z.v.size()) throw Error(ErrorCode::dimension, "u and v must have equal dimension");
  const double n = static_cast<double>(z.u.size());
  const double modulus = std::pow(pi / (2 * alpha), n / 2) *
                         std::exp(-alpha * z.u.squaredNorm() / 2 - pi * pi * z.v.squaredNorm() / (2 * alpha));
  return std::polar(modulus, pi * z.u.dot(z.v));
}

double gabor_correlation_modulus(double alpha, const Vector& lambda) {
  return std::abs(gabor_inner_product(alpha, TimeFrequencyPoint::from_stacked(lambda)));
}

CorrelationResult correlation(double alpha, const Lattice& lattice, double radius) {
  require_positive(alpha, "alpha");
  if (lattice.dim() % 2 != 0) throw Error(ErrorCode::dimension, "correlation needs a time-frequency lattice");
  const double n = lattice.dim() / 2.0;
  const double prefactor = std::pow(pi / (2 * alpha), n / 2);
  // |<phi, pi_lambda phi>| <= prefactor * exp(-rate |lambda|^2)
  const double rate = alpha / 2 * std::min(1.0, pi * pi / (alpha * alpha));
  double r = radius > 0 ? radius : 3 * lll_reduce(lattice).reduced.basis().col(0).norm();

  CorrelationResult best;
  for (int attempt = 0; attempt < 64; ++attempt) {
    best = {};
    bool found = false;
    for (const auto& p : enumerate_ball(lattice, r)) {
      if (p.squaredNorm() == 0) continue;
      const double value = gabor_correlation_modulus(alpha, p);
      if (!found || value > best.value * (1 + 1e-12)) {
        best.value = value;
        best.argmax = p;
        found = true;
      } else if (value >= best.value * (1 - 1e-12) && lex_greater(p, best.argmax)) {
        best.argmax = p;
        best.value = std::max(best.value, value);
      }
    }
    best.radius = r;
    if (found && prefactor * std::exp(-rate * r * r) < best.value) return best;
    r *= 2;
  }
  throw Error(ErrorCode::invalid_argument, "correlation search found no nonzero lattice vector within radius");
}

double c_l_sigma(const Lattice& lattice, double sigma) {
  require_positive(sigma, "sigma");
  const double ell = shortest_vector(dual(lattice)).length;
  return std::exp(-pi * pi / (4 * sigma) * ell * ell);
}

double c_l_sigma_critical_bound(int n, double dual_covolume, double sigma) {
  require_positive(sigma, "sigma");
  return std::exp(-n * pi * pi * std::pow(dual_covolume, 1.0 / (2 * n)) / (8 * sigma * pi * std::numbers::e));
}

double c_sigma_periodic(const PeriodicSet& set, double sigma) {
  require_positive(sigma, "sigma");
  const PeriodicSet dual_set(dual(set.lattice()), set.translations());
  const double ell = min_distance_periodic(dual_set);
  return std::exp(-pi * pi / (4 * sigma) * ell * ell);
}

double gaussian_convolution(double alpha, double beta, const Vector& shift, const Vector& x) {
  require_positive(alpha, "alpha");
  require_positive(beta, "beta");
  const double n = static_cast<double>(x.size());
  const double denom = beta * alpha + pi * pi;
  return std::pow(pi * pi / denom, n / 2) * std::exp(-alpha * pi * pi / denom * (x - shift).squaredNorm());
}

double kappa(double n, double xi, double beta, double sigma) {
  require_positive(n, "n");
  require_positive(xi, "xi");
  require_positive(beta, "beta");
  require_positive(sigma, "sigma");
  return std::exp(-n * sigma * beta * std::pow(xi, 1 / (2 * n)) / (2 * pi * std::numbers::e));
}

GrassmannianReport grassmannian_scan(double alpha, const std::vector<Lattice>& family) {
  require_positive(alpha, "alpha");
  if (family.empty()) throw Error(ErrorCode::invalid_argument, "lattice family is empty");
  const int dim = family.front().dim();
  const double covol = family.front().covolume();
  for (const auto& l : family) {
    if (l.dim() != dim) throw Error(ErrorCode::invalid_argument, "lattice family has mixed dimensions");
    if (std::abs(l.covolume() - covol) > 1e-8 * covol) {
      throw Error(ErrorCode::invalid_argument, "lattice family has mixed covolumes");
    }
  }
  GrassmannianReport r;
  for (const auto& l : family) {
    r.correlations.push_back(correlation(alpha, l).value);
    r.scaled_shortest_lengths.push_back(shortest_vector(scale_frequency_half(l, pi / alpha)).length);
  }
  constexpr double tie = 1e-9;
  for (std::size_t i = 1; i < family.size(); ++i) {
    const double c = r.correlations[i], cb = r.correlations[r.argmin_correlation];
    if (c < cb * (1 - tie) || (c <= cb * (1 + tie) && lex_less(family[i].basis(), family[r.argmin_correlation].basis()))) {
      r.argmin_correlation = i;
    }
    const double s = r.scaled_shortest_lengths[i], sb = r.scaled_shortest_lengths[r.argmax_length];
    if (s > sb * (1 + tie) || (s >= sb * (1 - tie) && lex_less(family[i].basis(), family[r.argmax_length].basis()))) {
      r.argmax_length = i;
    }
  }
  if (r.argmin_correlation != r.argmax_length) {
    throw Error(ErrorCode::internal, "minimal correlation and maximal shortest length select different lattices");
  }
  r.selected = r.argmin_correlation;
  return r;
}

}  // namespace cegabor
