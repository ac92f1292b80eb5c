#include "cegabor/wexler_raz.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "cegabor/error.hpp"

namespace cegabor {

namespace {

using std::numbers::pi;
using Complex = std::complex<double>;

// exp(-kTailExponent) is about 1e-16
const double kTailExponent = std::log(1e16);

double gaussian_reach(double alpha) { return std::sqrt(kTailExponent / alpha); }

void check_square(const Matrix& m, int n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::dimension, std::string(name) + " must be a square matrix of the window dimension");
  }
}

// integral over [lo, hi] of exp(-a (x - m)^2) exp(-2 pi i eta x)
Complex gaussian_segment(double a, double m, double eta, double lo, double hi) {
  const double spread = std::sqrt(40.0 / a);
  lo = std::max(lo, m - spread);
  hi = std::min(hi, m + spread);
  if (!(hi > lo)) return 0.0;
  double h = 0.5 / std::sqrt(a);
  if (eta != 0) h = std::min(h, 0.25 / std::abs(eta));
  const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
  const double width = (hi - lo) / pieces;
  auto f = [&](double x) { return std::exp(-a * (x - m) * (x - m)) * std::polar(1.0, -2 * pi * eta * x); };
  Complex sum = 0;
  for (int p = 0; p < pieces; ++p) {
    const double s = lo + p * width;
    sum += boost::math::quadrature::gauss<double, 20>::integrate(f, s, s + width);
  }
  return sum;
}

}  // namespace

Window::Window(WindowKind kind, double alpha, int omega, Matrix c)
    : kind_(kind), alpha_(alpha), omega_(omega), c_(std::move(c)) {
  if (c_.rows() == 0 || c_.rows() != c_.cols()) throw Error(ErrorCode::dimension, "window matrix must be square");
  const double det = std::abs(c_.determinant());
  if (!(det > 0)) throw Error(ErrorCode::invalid_lattice, "window matrix is singular");
  c_inv_ = c_.inverse();
  const double n = static_cast<double>(c_.cols());
  if (kind_ == WindowKind::hat) {
    prefactor_ = 1 / std::sqrt(det);
  } else {
    if (!(alpha_ > 0)) throw Error(ErrorCode::invalid_argument, "alpha must be positive");
    prefactor_ = std::sqrt(det) * std::pow(alpha_ / pi, n / 2);
  }
}

Window Window::gaussian(double alpha, const Matrix& c) { return Window(WindowKind::gaussian, alpha, 0, c); }

Window Window::truncated_gaussian(double alpha, const Matrix& c, int omega) {
  if (omega < 1) throw Error(ErrorCode::invalid_argument, "omega must be at least 1");
  return Window(WindowKind::truncated_gaussian, alpha, omega, c);
}

Window Window::hat(const Matrix& c) { return Window(WindowKind::hat, 0, 0, c); }

double Window::operator()(const Vector& x) const {
  switch (kind_) {
    case WindowKind::gaussian:
      return prefactor_ * std::exp(-alpha_ * x.squaredNorm());
    case WindowKind::truncated_gaussian:
      if (x.cwiseAbs().maxCoeff() > omega_) return 0;
      return prefactor_ * std::exp(-alpha_ * x.squaredNorm());
    case WindowKind::hat: {
      const Vector y = c_inv_ * x;
      double v = prefactor_;
      for (Eigen::Index i = 0; i < y.size(); ++i) v *= std::max(0.0, 1 - std::abs(y(i)));
      return v;
    }
  }
  return 0;
}

double Window::reach() const {
  switch (kind_) {
    case WindowKind::gaussian: return gaussian_reach(alpha_);
    case WindowKind::truncated_gaussian: return std::min(gaussian_reach(alpha_), std::sqrt(dim()) * omega_);
    case WindowKind::hat: return c_.colwise().norm().sum();
  }
  return 0;
}

NormCondition chrkim_norm_condition(const Matrix& c, const Matrix& b, int omega) {
  if (c.rows() != c.cols() || b.rows() != b.cols() || c.rows() != b.rows()) {
    throw Error(ErrorCode::dimension, "C and B must be square matrices of equal size");
  }
  if (omega < 1) throw Error(ErrorCode::invalid_argument, "omega must be at least 1");
  const Matrix m = c.transpose() * b;
  NormCondition r;
  r.norm = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  r.bound = 1 / (std::sqrt(static_cast<double>(c.rows())) * (2 * omega - 1));
  r.margin = r.bound - r.norm;
  r.pass = r.norm <= r.bound * (1 + 1e-12);
  return r;
}

int omega_for_epsilon(double alpha, double epsilon, int dim) {
  if (!(alpha > 0)) throw Error(ErrorCode::invalid_argument, "alpha must be positive");
  if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::invalid_argument, "epsilon must lie in (0, 1)");
  if (dim < 1) throw Error(ErrorCode::dimension, "dimension must be positive");
  for (int omega = 1; omega < 1'000'000; ++omega) {
    const double tail = std::exp(-alpha * omega * omega);
    const double aliasing =
        2 * dim * std::exp(-(pi * pi / alpha) * dim * (2.0 * omega - 1) * (2.0 * omega - 1));
    if (tail < epsilon && aliasing < epsilon) return omega;
  }
  throw Error(ErrorCode::budget, "no omega satisfies the epsilon sizing rule");
}

DualWindow::DualWindow(Window base, Matrix c, Matrix b, MultiplicityMap multiplicities, std::optional<double> epsilon)
    : base_(std::move(base)), c_(std::move(c)), b_(std::move(b)), mu_(std::move(multiplicities)), epsilon_(epsilon) {
  const int n = base_.dim();
  check_square(c_, n, "C");
  check_square(b_, n, "B");
  if (mu_.dim() != n) throw Error(ErrorCode::dimension, "multiplicity map dimension mismatch");
  det_factor_ = std::abs((c_.transpose() * b_).determinant());
  if (!(det_factor_ > 0)) throw Error(ErrorCode::invalid_lattice, "det(C^t B) vanishes");
  terms_.emplace_back(Vector::Zero(n), 1.0);
  for (const auto& [k, mu] : mu_.entries()) {
    if (mu == 0) continue;
    Vector l(n);
    for (int i = 0; i < n; ++i) l(i) = k[i];
    terms_.emplace_back(c_ * l, 2.0 * mu);
  }
}

double DualWindow::operator()(const Vector& x) const {
  double sum = 0;
  for (const auto& [shift, weight] : terms_) sum += weight * base_(x + shift);
  return det_factor_ * sum;
}

double DualWindow::reach() const {
  double far = 0;
  for (const auto& t : terms_) far = std::max(far, t.first.norm());
  return base_.reach() + far;
}

double DualWindow::error_budget() const {
  if (!epsilon_) throw Error(ErrorCode::invalid_argument, "dual window has no epsilon budget");
  return cegabor::error_budget(*epsilon_, det_factor_, mu_);
}

double error_budget(double epsilon, double det_factor, const MultiplicityMap& mu) {
  return std::max(epsilon, det_factor * (1 + 2.0 * static_cast<double>(mu.total())) * epsilon);
}

DualWindow build_dual_window(const Window& base, const Matrix& c, const Matrix& b, int omega,
                             MultiplicityStrategy strategy) {
  const auto cond = chrkim_norm_condition(c, b, omega);
  if (!cond.pass) {
    throw Error(ErrorCode::norm_condition, "norm condition ||C^t B|| <= 1/(sqrt(n)(2 omega - 1)) fails: norm " +
                                              std::to_string(cond.norm) + ", bound " + std::to_string(cond.bound) +
                                              ", margin " + std::to_string(cond.margin));
  }
  return DualWindow(base, c, b, build_multiplicity(base.dim(), omega, strategy));
}

DualWindow build_dual_window(double alpha, const Matrix& c, const Matrix& b, int omega, MultiplicityStrategy strategy,
                             bool truncated) {
  const Window base = truncated ? Window::truncated_gaussian(alpha, c, omega) : Window::gaussian(alpha, c);
  return build_dual_window(base, c, b, omega, strategy);
}

double partition_sum(double alpha, const Vector& spacing, const Vector& t) {
  const double reach = std::sqrt(46.0 / alpha);
  double product = 1;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double d = spacing(i);
    const auto lo = static_cast<long long>(std::floor((t(i) - reach) / d));
    const auto hi = static_cast<long long>(std::ceil((t(i) + reach) / d));
    double s = 0;
    for (long long k = lo; k <= hi; ++k) {
      const double y = t(i) - static_cast<double>(k) * d;
      s += std::exp(-alpha * y * y);
    }
    product *= d * std::sqrt(alpha / pi) * s;
  }
  return product;
}

double partition_first_harmonic(double alpha, const Vector& spacing, const Vector& t) {
  double law = 1;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double d = spacing(i);
    law += 2 * std::cos(2 * pi * t(i) / d) * std::exp(-pi * pi / (alpha * d * d));
  }
  return law;
}

double partition_fourier_series(double alpha, const Vector& spacing, const Vector& t) {
  double product = 1;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double d = spacing(i);
    double s = 1;
    for (int m = 1;; ++m) {
      const double coeff = std::exp(-pi * pi * m * m / (alpha * d * d));
      if (coeff < 1e-20) break;
      s += 2 * std::cos(2 * pi * m * t(i) / d) * coeff;
    }
    product *= s;
  }
  return product;
}

PartitionOfUnityReport partition_of_unity_residual(double alpha, const Vector& spacing, int points_per_period) {
  if (!(alpha > 0)) throw Error(ErrorCode::invalid_argument, "alpha must be positive");
  if (spacing.size() == 0 || (spacing.array() <= 0).any()) {
    throw Error(ErrorCode::invalid_argument, "spacings must be positive");
  }
  if (points_per_period < 1) throw Error(ErrorCode::invalid_argument, "grid needs at least one point per period");
  const auto n = spacing.size();
  PartitionOfUnityReport r;
  r.bound = 2 * n * std::exp(-pi * pi / (alpha * spacing.maxCoeff() * spacing.maxCoeff()));
  std::vector<int> idx(n, 0);
  Vector t(n);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) t(i) = spacing(i) * idx[i] / points_per_period;
    const double s = partition_sum(alpha, spacing, t);
    r.max_residual = std::max(r.max_residual, std::abs(s - 1));
    r.max_law_deviation = std::max(r.max_law_deviation, std::abs(s - partition_first_harmonic(alpha, spacing, t)));
    r.max_series_deviation = std::max(r.max_series_deviation, std::abs(s - partition_fourier_series(alpha, spacing, t)));
    ++r.grid_points;
    Eigen::Index i = n - 1;
    while (i >= 0 && idx[i] == points_per_period - 1) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
  return r;
}

WrIdentityReport wr_identity_residual(const Window& phi, const DualWindow& gamma, const Matrix& c, const Matrix& b,
                                      int points_per_dim) {
  const int n = phi.dim();
  check_square(c, n, "C");
  check_square(b, n, "B");
  if (points_per_dim < 1) throw Error(ErrorCode::invalid_argument, "grid needs at least one point per dimension");
  const Lattice time_lattice(c);
  const Lattice shift_lattice(b.inverse().transpose());
  const double det_b = std::abs(b.determinant());
  const auto shifts = enumerate_ball(shift_lattice, phi.reach() + gamma.reach());

  WrIdentityReport r;
  r.shifts = shifts.size();
  r.worst_shift = Vector::Zero(n);
  std::vector<int> idx(n, 0);
  Vector u(n);
  std::vector<double> lhs(shifts.size());
  while (true) {
    for (int i = 0; i < n; ++i) u(i) = static_cast<double>(idx[i]) / points_per_dim;
    const Vector x = c * u;
    std::fill(lhs.begin(), lhs.end(), 0.0);
    for (const auto& p : enumerate_ball(time_lattice, gamma.reach(), x)) {
      const Vector y = x - p;
      const double g = gamma(y);
      if (g == 0) continue;
      for (std::size_t s = 0; s < shifts.size(); ++s) lhs[s] += phi(y - shifts[s]) * g;
    }
    for (std::size_t s = 0; s < shifts.size(); ++s) {
      const double target = shifts[s].squaredNorm() == 0 ? det_b : 0.0;
      const double err = std::abs(lhs[s] - target);
      if (err > r.max_residual) {
        r.max_residual = err;
        r.worst_shift = shifts[s];
      }
    }
    ++r.grid_points;
    int i = n - 1;
    while (i >= 0 && idx[i] == points_per_dim - 1) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
  return r;
}

std::complex<double> dual_inner_product(const DualWindow& gamma, const Vector& time, const Vector& frequency) {
  const Window& base = gamma.base();
  if (base.kind() == WindowKind::hat) {
    throw Error(ErrorCode::unsupported, "closed-form inner products need a Gaussian window");
  }
  const double alpha = base.alpha();
  const double p2 = base.prefactor() * base.prefactor();
  const auto n = time.size();
  Complex total = 0;
  for (const auto& [a, weight] : gamma.terms()) {
    const Vector m = (time - a) / 2;
    Complex term;
    if (base.kind() == WindowKind::gaussian) {
      const double modulus = std::exp(-alpha * (a + time).squaredNorm() / 2) *
                             std::pow(pi / (2 * alpha), n / 2.0) *
                             std::exp(-pi * pi * frequency.squaredNorm() / (2 * alpha));
      term = std::polar(modulus, -2 * pi * frequency.dot(m));
    } else {
      const double omega = base.omega();
      term = 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double lo = std::max(-omega - a(i), time(i) - omega);
        const double hi = std::min(omega - a(i), time(i) + omega);
        const double s = a(i) + time(i);
        term *= std::exp(-alpha * s * s / 2) * gaussian_segment(2 * alpha, m(i), frequency(i), lo, hi);
        if (term == Complex(0)) break;
      }
    }
    total += weight * term;
  }
  return gamma.det_factor() * p2 * total;
}

BiorthogonalityReport biorthogonality_residual(const DualWindow& gamma, const ProductLattice& lattice, double radius) {
  const int n = gamma.base().dim();
  if (lattice.half_dim() != n) throw Error(ErrorCode::dimension, "lattice dimension does not match the window");
  const double alpha = gamma.alpha();
  if (radius <= 0) {
    double far = 0;
    for (const auto& t : gamma.terms()) far = std::max(far, t.first.norm());
    const double time_reach = 2 * gamma.base().reach() + far;
    const double freq_reach = std::sqrt(2 * alpha * kTailExponent) / pi;
    radius = std::hypot(time_reach, freq_reach);
  }
  const Lattice adj = adjoint(lattice.combined());
  const double covol = lattice.covolume();
  BiorthogonalityReport r;
  r.radius = radius;
  r.worst = Vector::Zero(2 * n);
  for (const auto& z : enumerate_ball(adj, radius)) {
    const Complex ip = dual_inner_product(gamma, z.head(n), z.tail(n)) / covol;
    ++r.points;
    if (z.squaredNorm() == 0) {
      r.diagonal_error = std::abs(ip - 1.0);
      if (r.diagonal_error > r.max_residual) {
        r.max_residual = r.diagonal_error;
        r.worst = z;
      }
    } else {
      const double v = std::abs(ip);
      r.max_offdiagonal = std::max(r.max_offdiagonal, v);
      if (v > r.max_residual) {
        r.max_residual = v;
        r.worst = z;
      }
    }
  }
  return r;
}

}  // namespace cegabor
