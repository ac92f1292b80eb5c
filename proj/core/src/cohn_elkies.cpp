#include "cegabor/cohn_elkies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "cegabor/error.hpp"
#include "cegabor/wexler_raz.hpp"

namespace cegabor {

namespace {

using std::numbers::pi;

Matrix basis_or_identity(const std::optional<Matrix>& basis, int dim) {
  if (!basis) return Matrix::Identity(dim, dim);
  if (basis->rows() != dim || basis->cols() != dim) {
    throw Error(ErrorCode::dimension, "translation basis does not match the multiplicity dimension");
  }
  return *basis;
}

Vector to_vector(const IndexVector& k) {
  Vector v(static_cast<Eigen::Index>(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) v(static_cast<Eigen::Index>(i)) = k[i];
  return v;
}

double upsilon_of(const DirichletKernel& kernel, double decay) {
  double sum = 0;
  for (const auto& t : kernel.square_terms()) sum += t.weight * std::exp(-decay * t.shift.squaredNorm());
  return sum;
}

ZeroValues zero_values_unchecked(const CEFunction& ce) {
  const double n = ce.dim();
  const double c = ce.cutoff_constant();
  ZeroValues z;
  z.f0 = (1 - c) * ce.det_factor() * std::pow(pi / ce.alpha(), n / 2) * upsilon_of(ce.kernel(), 0);
  z.ft0 = ce.det_factor() *
          (ce.convolution_scale() * upsilon_of(ce.kernel(), ce.mixed_decay()) - c * upsilon_of(ce.kernel(), ce.alpha()));
  return z;
}

void require_positive(double value, const char* name) {
  if (!(value > 0) || !std::isfinite(value)) {
    throw Error(ErrorCode::invalid_argument, std::string(name) + " must be positive and finite");
  }
}

}  // namespace

const char* to_string(CutoffConvention convention) {
  return convention == CutoffConvention::consistent ? "consistent" : "literal";
}

CutoffConvention parse_convention(const std::string& name) {
  if (name == "consistent") return CutoffConvention::consistent;
  if (name == "literal") return CutoffConvention::literal;
  throw Error(ErrorCode::invalid_argument, "unknown cutoff convention '" + name + "'");
}

DirichletKernel::DirichletKernel(MultiplicityMap mu, std::optional<Matrix> translation_basis)
    : mu_(std::move(mu)), basis_(basis_or_identity(translation_basis, mu_.dim())) {
  if (!mu_.is_symmetric()) {
    throw Error(ErrorCode::asymmetric_multiplicity, "Dirichlet kernel needs symmetric multiplicities to be real");
  }
  std::map<IndexVector, double> weights;
  weights[IndexVector(mu_.dim(), 0)] += 1;
  for (const auto& [k, m] : mu_.entries()) {
    if (m == 0) continue;
    cos_terms_.emplace_back(basis_ * to_vector(k), 2.0 * m);
    weights[k] += 4.0 * m;
  }
  for (const auto& [k1, m1] : mu_.entries()) {
    if (m1 == 0) continue;
    for (const auto& [k2, m2] : mu_.entries()) {
      if (m2 == 0) continue;
      IndexVector s(k1.size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = k1[i] + k2[i];
      weights[s] += 4.0 * m1 * m2;
    }
  }
  for (const auto& [k, w] : weights) square_.push_back({k, basis_ * to_vector(k), w});
}

double DirichletKernel::operator()(const Vector& x) const {
  double sum = 1;
  for (const auto& [shift, w] : cos_terms_) sum += w * std::cos(2 * pi * shift.dot(x));
  return sum;
}

double dirichlet_kernel(const MultiplicityMap& mu, const Vector& x) { return DirichletKernel(mu)(x); }

double upsilon(double decay, const MultiplicityMap& mu, const std::optional<Matrix>& translation_basis) {
  if (!(decay >= 0)) throw Error(ErrorCode::invalid_argument, "decay must be nonnegative");
  return upsilon_of(DirichletKernel(mu, translation_basis), decay);
}

double upsilon_limit(const MultiplicityMap& mu, const std::optional<Matrix>& translation_basis) {
  DirichletKernel kernel(mu, translation_basis);
  double sum = 0;
  for (const auto& t : kernel.square_terms()) {
    if (std::all_of(t.index.begin(), t.index.end(), [](int v) { return v == 0; })) sum += t.weight;
  }
  return sum;
}

double cutoff_decay(double sigma, CutoffConvention convention) {
  require_positive(sigma, "sigma");
  return convention == CutoffConvention::consistent ? pi * pi / (4 * sigma) : pi * pi / (4 * sigma * sigma);
}

CEFunction::CEFunction(Lattice lattice, Matrix k_basis, double alpha, double sigma, MultiplicityMap mu,
                       CutoffConvention convention, double separation)
    : lattice_(std::move(lattice)),
      k_basis_(std::move(k_basis)),
      alpha_(alpha),
      sigma_(sigma),
      convention_(convention),
      separation_(separation),
      beta_(cutoff_decay(sigma, convention)),
      cutoff_(std::exp(-pi * pi / (4 * sigma) * separation * separation)),
      size_(std::sqrt(pi * pi / (4 * sigma) * separation * separation / beta_)),
      det_factor_(0),
      kernel_(std::move(mu), lattice_.basis()) {
  require_positive(alpha, "alpha");
  require_positive(separation, "separation");
  const int n = lattice_.dim();
  if (k_basis_.rows() != n || k_basis_.cols() != n) throw Error(ErrorCode::dimension, "K basis dimension mismatch");
  if (kernel_.multiplicities().dim() != n) throw Error(ErrorCode::dimension, "multiplicity dimension mismatch");
  det_factor_ = std::abs((lattice_.basis().transpose() * k_basis_).determinant());
  if (!(det_factor_ > 0)) throw Error(ErrorCode::invalid_lattice, "det(C^t B) vanishes");
}

double CEFunction::f(const Vector& x) const {
  const double r2 = x.squaredNorm();
  const double d = kernel_(x);
  const double psi = std::pow(pi / alpha_, dim() / 2.0) * std::exp(-pi * pi * r2 / alpha_);
  return det_factor_ * d * d * psi * (std::exp(-beta_ * r2) - cutoff_);
}

double CEFunction::ft(const Vector& xi) const {
  const double scale = convolution_scale();
  const double mixed = mixed_decay();
  double sum = 0;
  for (const auto& t : kernel_.square_terms()) {
    const double r2 = (xi - t.shift).squaredNorm();
    sum += t.weight * (scale * std::exp(-mixed * r2) - cutoff_ * std::exp(-alpha_ * r2));
  }
  return det_factor_ * sum;
}

double CEFunction::convolution_scale() const {
  return std::pow(pi * pi / (beta_ * alpha_ + pi * pi), dim() / 2.0);
}

double CEFunction::mixed_decay() const { return alpha_ * pi * pi / (beta_ * alpha_ + pi * pi); }

double CEFunction::max_shift() const {
  double m = 0;
  for (const auto& t : kernel_.square_terms()) m = std::max(m, t.shift.norm());
  return m;
}

CEFunction CEFunction::with_cutoff_constant(double cutoff) const {
  CEFunction copy = *this;
  copy.cutoff_ = cutoff;
  return copy;
}

CEFunction make_ce(const Lattice& l, const Lattice& k, double alpha, double sigma, const MultiplicityMap& mu,
                   CutoffConvention convention) {
  if (l.dim() != k.dim()) throw Error(ErrorCode::dimension, "L and K must have equal dimension");
  const double separation = shortest_vector(dual(l)).length;
  return CEFunction(l, k.basis(), alpha, sigma, mu, convention, separation);
}

CEFunction build_ce(const Lattice& l, const Lattice& k, double alpha, double sigma, int omega,
                    CutoffConvention convention) {
  if (l.dim() != k.dim()) throw Error(ErrorCode::dimension, "L and K must have equal dimension");
  require_positive(alpha, "alpha");
  const int n = l.dim();
  const auto cond = chrkim_norm_condition(l.basis(), k.basis(), omega);
  if (!cond.pass) {
    throw Error(ErrorCode::norm_condition, "norm condition fails with margin " + std::to_string(cond.margin));
  }
  const Lattice dual_l = dual(l);
  const auto range = parameter_range(alpha, sigma, dual_l.covolume(), n, cutoff_decay(sigma, convention));
  if (!range.simple_pass) {
    throw Error(ErrorCode::parameter_range,
                "alpha exceeds q*pi = " + std::to_string(range.q * pi) + " (margin " +
                    std::to_string(range.simple_margin) + ")");
  }
  auto mu = build_multiplicity(n, omega, MultiplicityStrategy::quadrant_symmetric);
  CEFunction ce = make_ce(l, k, alpha, sigma, mu, convention);
  const auto crit = criticality_check(dual_l);
  if (!crit.supported) {
    ce.add_warning("criticality of the dual lattice cannot be checked in dimension " + std::to_string(n));
  } else if (!crit.critical) {
    ce.add_warning("dual lattice is not critical (relative gap " + std::to_string(crit.relative_gap) + ")");
  }
  return ce;
}

double eval_f(const CEFunction& ce, const Vector& x) { return ce.f(x); }

double eval_ft(const CEFunction& ce, const Vector& xi) { return ce.ft(xi); }

ParameterRangeReport parameter_range(double alpha, double sigma, double xi, int dim, double beta) {
  require_positive(alpha, "alpha");
  require_positive(sigma, "sigma");
  require_positive(xi, "xi");
  require_positive(beta, "beta");
  if (dim < 1) throw Error(ErrorCode::dimension, "dimension must be positive");
  ParameterRangeReport r;
  r.q = xi <= 1 ? sigma * xi / std::numbers::e : sigma / std::numbers::e;
  r.simple_margin = r.q * pi - alpha;
  r.simple_pass = alpha <= r.q * pi * (1 + 1e-12);
  const double lhs = std::log1p(beta * alpha / (pi * pi));
  const double rhs = sigma * beta * std::pow(xi, 1.0 / (2 * dim)) / (pi * std::numbers::e);
  r.log_margin = rhs - lhs;
  r.log_pass = lhs <= rhs;
  return r;
}

std::vector<Vector> grid_directions(int dim, const GridOptions& options) {
  std::vector<Vector> dirs;
  if (dim == 1) {
    dirs.push_back(Vector::Constant(1, 1.0));
    dirs.push_back(Vector::Constant(1, -1.0));
    return dirs;
  }
  if (dim == 2) {
    for (int i = 0; i < options.angular; ++i) {
      const double t = 2 * pi * i / options.angular;
      Vector v(2);
      v << std::cos(t), std::sin(t);
      dirs.push_back(v);
    }
    return dirs;
  }
  for (int i = 0; i < dim; ++i) {
    dirs.push_back(Vector::Unit(dim, i));
    dirs.push_back(-Vector::Unit(dim, i));
  }
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < options.random_directions; ++i) {
    Vector v(dim);
    for (int j = 0; j < dim; ++j) v(j) = normal(rng);
    dirs.push_back(v.normalized());
  }
  return dirs;
}

AnalyticFtCriterion analytic_ft_criterion(const CEFunction& ce) {
  AnalyticFtCriterion a;
  a.margin = ce.convolution_scale() - ce.cutoff_constant();
  a.pass = a.margin >= 0;
  return a;
}

FtNonnegReport verify_ft_nonneg(const CEFunction& ce, const GridOptions& options, double tolerance) {
  FtNonnegReport r;
  r.analytic = analytic_ft_criterion(ce);
  r.tolerance = tolerance;
  const double step = ce.size() / options.radial_per_size;
  const double decay = std::min(ce.mixed_decay(), ce.alpha());
  r.max_radius = ce.max_shift() + std::sqrt(-std::log(options.tail) / decay);
  const auto steps = static_cast<long long>(std::ceil(r.max_radius / step));
  r.grid_min = ce.ft(Vector::Zero(ce.dim()));
  r.grid_points = 1;
  for (const auto& dir : grid_directions(ce.dim(), options)) {
    for (long long i = 1; i <= steps; ++i) {
      r.grid_min = std::min(r.grid_min, ce.ft(dir * (step * static_cast<double>(i))));
      ++r.grid_points;
    }
  }
  r.grid_pass = r.grid_min >= -tolerance;
  return r;
}

bool symbolic_sign_check(const CEFunction& ce) {
  const double c = ce.cutoff_constant();
  return ce.det_factor() > 0 && c > 0 && c < 1 && ce.multiplicities().is_symmetric() &&
         std::abs(std::exp(-ce.beta_cutoff() * ce.size() * ce.size()) - c) <= 1e-12 * c;
}

SignReport verify_sign(const CEFunction& ce, const GridOptions& options, double tolerance) {
  SignReport r;
  r.tolerance = tolerance;
  r.symbolic = symbolic_sign_check(ce);
  const double step = ce.size() / options.radial_per_size;
  const auto steps = static_cast<long long>(std::ceil(options.sign_extent / step));
  r.grid_max = -std::numeric_limits<double>::infinity();
  for (const auto& dir : grid_directions(ce.dim(), options)) {
    for (long long i = 0; i <= steps; ++i) {
      r.grid_max = std::max(r.grid_max, ce.f(dir * (ce.size() + step * static_cast<double>(i))));
      ++r.grid_points;
    }
  }
  r.grid_pass = r.grid_max <= tolerance;
  return r;
}

ZeroValues ce_values_at_zero(const CEFunction& ce) {
  const auto z = zero_values_unchecked(ce);
  if (!(z.ft0 > 0)) throw Error(ErrorCode::invalid_ce, "Fourier transform at the origin is not positive");
  return z;
}

BoundReport ce_bound(const CEFunction& ce) {
  const auto z = ce_values_at_zero(ce);
  BoundReport b;
  b.size = ce.size();
  b.f0 = z.f0;
  b.ft0 = z.ft0;
  b.bound = std::pow(ce.size() / 2, ce.dim()) * z.f0 / z.ft0;
  b.center_density = center_density(ce.dual_lattice());
  b.ratio = b.bound / b.center_density;
  return b;
}

SpecialnessReport specialness_residual(const CEFunction& ce, double tolerance) {
  const auto z = zero_values_unchecked(ce);
  const double xi = ce.dual_lattice().covolume();
  const double c = ce.cutoff_constant();
  const double n = ce.dim();
  SpecialnessReport s;
  s.tolerance = tolerance;
  s.ratio_residual = z.f0 / z.ft0 - 1 / xi;
  s.expanded_lhs = upsilon_of(ce.kernel(), 0) * (1 - c) * std::pow(pi / ce.alpha(), n / 2) +
                   c / xi * upsilon_of(ce.kernel(), ce.alpha());
  s.expanded_rhs = ce.convolution_scale() * upsilon_of(ce.kernel(), ce.mixed_decay()) / xi;
  s.expanded_residual = s.expanded_lhs - s.expanded_rhs;
  s.zero_sets_agree = (std::abs(s.ratio_residual) <= tolerance) == (std::abs(s.expanded_residual) <= tolerance);
  return s;
}

double poisson_radius(const CEFunction& ce, double tail) {
  const double n = ce.dim();
  const double f_peak = ce.det_factor() * upsilon_of(ce.kernel(), 0) * std::pow(pi / ce.alpha(), n / 2);
  const double f_reach = std::sqrt(std::max(0.0, std::log(std::max(1.0, f_peak) / tail)) * ce.alpha() / (pi * pi));
  double weight = 0;
  for (const auto& t : ce.kernel().square_terms()) weight += t.weight;
  const double ft_peak = ce.det_factor() * weight * std::max(ce.convolution_scale(), ce.cutoff_constant());
  const double ft_reach =
      ce.max_shift() + std::sqrt(std::max(0.0, std::log(std::max(1.0, ft_peak) / tail)) / ce.mixed_decay());
  return std::max(f_reach, ft_reach);
}

PoissonReport poisson_residual(const CEFunction& ce, const Lattice& probe, double radius) {
  if (probe.dim() != ce.dim()) throw Error(ErrorCode::dimension, "probe lattice dimension mismatch");
  PoissonReport p;
  p.radius = radius;
  for (const auto& v : enumerate_ball(probe, radius)) p.lattice_sum += ce.f(v);
  for (const auto& w : enumerate_ball(dual(probe), radius)) p.dual_sum += ce.ft(w);
  p.dual_sum /= probe.covolume();
  p.residual = std::abs(p.lattice_sum - p.dual_sum);
  return p;
}

ZeroCheckReport zero_check(const CEFunction& ce, const Lattice& probe, double radius, double tolerance) {
  ZeroCheckReport z;
  z.tolerance = tolerance;
  for (const auto& v : enumerate_ball(probe, radius)) {
    if (v.squaredNorm() > 0) z.max_f = std::max(z.max_f, std::abs(ce.f(v)));
  }
  for (const auto& w : enumerate_ball(dual(probe), radius)) {
    if (w.squaredNorm() > 0) z.max_ft = std::max(z.max_ft, std::abs(ce.ft(w)));
  }
  z.special_residual = specialness_residual(ce, tolerance).ratio_residual;
  z.special_consistent = z.max_f <= tolerance && z.max_ft <= tolerance && std::abs(z.special_residual) <= tolerance;
  return z;
}

CEReport verify_ce(const CEFunction& ce, const GridOptions& options, const Tolerances& tol) {
  CEReport r;
  r.dim = ce.dim();
  r.omega = ce.multiplicities().omega();
  r.strategy = ce.multiplicities().strategy();
  r.convention = ce.convention();
  r.alpha = ce.alpha();
  r.sigma = ce.sigma();
  r.beta_cutoff = ce.beta_cutoff();
  r.cutoff_constant = ce.cutoff_constant();
  r.det_factor = ce.det_factor();
  r.separation = ce.separation();
  r.tolerances = tol;
  r.warnings = ce.warnings();

  const Lattice probe = ce.dual_lattice();
  const auto z = zero_values_unchecked(ce);
  r.ft_zero_positive = z.ft0 > 0;
  r.bound.size = ce.size();
  r.bound.f0 = z.f0;
  r.bound.ft0 = z.ft0;
  r.bound.center_density = center_density(probe);
  r.bound.bound = r.ft_zero_positive ? std::pow(ce.size() / 2, ce.dim()) * z.f0 / z.ft0
                                     : std::numeric_limits<double>::quiet_NaN();
  r.bound.ratio = r.bound.bound / r.bound.center_density;

  r.sign = verify_sign(ce, options, tol.sign_grid);
  r.sign_ok = r.sign.symbolic && r.sign.grid_pass;
  r.ft = verify_ft_nonneg(ce, options, tol.ft_grid);
  r.range = parameter_range(ce.alpha(), ce.sigma(), probe.covolume(), ce.dim(), ce.beta_cutoff());
  r.special = specialness_residual(ce, tol.special);
  r.poisson = poisson_residual(ce, probe, poisson_radius(ce));
  return r;
}

}  // namespace cegabor
