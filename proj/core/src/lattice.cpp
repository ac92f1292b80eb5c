#include "cegabor/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cegabor/error.hpp"

namespace cegabor {

namespace {

constexpr int kMaxEnumerationDim = 12;

bool lex_greater(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) > b(i);
  }
  return false;
}

struct GramSchmidt {
  Matrix mu;
  Vector norms_sq;
};

GramSchmidt gram_schmidt(const Matrix& b) {
  const auto n = b.cols();
  GramSchmidt gs{Matrix::Zero(n, n), Vector::Zero(n)};
  Matrix star = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      gs.mu(i, j) = b.col(i).dot(star.col(j)) / gs.norms_sq(j);
      star.col(i) -= gs.mu(i, j) * star.col(j);
    }
    gs.norms_sq(i) = star.col(i).squaredNorm();
  }
  return gs;
}

class Enumerator {
 public:
  Enumerator(const Matrix& basis, const Vector& target, double radius_sq, long long budget)
      : n_(static_cast<int>(basis.cols())), radius_sq_(radius_sq), budget_(budget) {
    Eigen::HouseholderQR<Matrix> qr(basis);
    r_ = qr.matrixQR().triangularView<Eigen::Upper>();
    Matrix q = qr.householderQ();
    y_ = q.transpose() * target;
    x_ = Vector::Zero(n_);
  }

  std::vector<Vector> run() {
    recurse(n_ - 1, 0.0);
    return std::move(found_);
  }

 private:
  void recurse(int level, double partial) {
    if (++nodes_ > budget_) {
      throw Error(ErrorCode::budget, "lattice enumeration exceeded its node budget");
    }
    double shift = y_(level);
    for (int j = level + 1; j < n_; ++j) shift -= r_(level, j) * x_(j);
    const double diag = r_(level, level);
    const double center = shift / diag;
    const double slack = radius_sq_ - partial;
    if (slack < 0) return;
    const double width = std::sqrt(slack) / std::abs(diag);
    const auto lo = static_cast<long long>(std::ceil(center - width - 1e-12));
    const auto hi = static_cast<long long>(std::floor(center + width + 1e-12));
    for (long long v = lo; v <= hi; ++v) {
      const double d = diag * (static_cast<double>(v) - center);
      const double next = partial + d * d;
      if (next > radius_sq_ * (1 + 1e-12) + 1e-300) continue;
      x_(level) = static_cast<double>(v);
      if (level == 0) {
        found_.push_back(x_);
      } else {
        recurse(level - 1, next);
      }
    }
    x_(level) = 0;
  }

  int n_;
  double radius_sq_;
  long long budget_;
  long long nodes_ = 0;
  Matrix r_;
  Vector y_;
  Vector x_;
  std::vector<Vector> found_;
};

}  // namespace

Lattice::Lattice(Matrix basis, std::string label) : basis_(std::move(basis)), label_(std::move(label)) {
  if (basis_.rows() == 0 || basis_.rows() != basis_.cols()) {
    throw Error(ErrorCode::invalid_lattice, "lattice basis must be a non-empty square matrix");
  }
  if (!basis_.allFinite()) throw Error(ErrorCode::invalid_lattice, "lattice basis has non-finite entries");
  double scale = 1;
  for (Eigen::Index j = 0; j < basis_.cols(); ++j) scale *= basis_.col(j).norm();
  const double det = std::abs(basis_.determinant());
  if (!(scale > 0) || det <= 1e-12 * scale) {
    throw Error(ErrorCode::invalid_lattice, "lattice basis is singular");
  }
}

Lattice Lattice::integer(int n) {
  if (n < 1) throw Error(ErrorCode::dimension, "dimension must be positive");
  return Lattice(Matrix::Identity(n, n), "Z" + std::to_string(n));
}

double Lattice::covolume() const { return std::abs(basis_.determinant()); }

Lattice Lattice::scaled(double factor) const { return Lattice(basis_ * factor, label_); }

Lattice Lattice::with_label(std::string label) const { return Lattice(basis_, std::move(label)); }

ProductLattice::ProductLattice(Lattice l, Lattice r) : left(std::move(l)), right(std::move(r)) {
  if (left.dim() != right.dim()) {
    throw Error(ErrorCode::dimension, "product lattice factors must have equal dimension");
  }
}

Lattice ProductLattice::combined() const { return direct_sum(left, right); }

PeriodicSet::PeriodicSet(Lattice lattice, std::vector<Vector> translations)
    : lattice_(std::move(lattice)), translations_(std::move(translations)) {
  if (translations_.empty()) throw Error(ErrorCode::degenerate_set, "periodic set needs at least one translation");
  for (const auto& a : translations_) {
    if (a.size() != lattice_.dim()) throw Error(ErrorCode::dimension, "translation dimension mismatch");
    if (!a.allFinite()) throw Error(ErrorCode::invalid_argument, "translation has non-finite entries");
  }
  for (std::size_t i = 0; i < translations_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (congruent_mod(lattice_, translations_[i], translations_[j])) {
        throw Error(ErrorCode::degenerate_set,
                    "translations " + std::to_string(j) + " and " + std::to_string(i) + " are congruent modulo the lattice");
      }
    }
  }
}

Matrix symplectic_j(int n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

Lattice dual(const Lattice& lattice) {
  return Lattice(lattice.basis().inverse().transpose(), lattice.label().empty() ? "" : lattice.label() + "^dual");
}

Lattice adjoint(const Lattice& lattice) {
  if (lattice.dim() % 2 != 0) throw Error(ErrorCode::dimension, "adjoint lattice requires even dimension");
  const int n = lattice.dim() / 2;
  Matrix j_inv = -symplectic_j(n);
  return Lattice(j_inv * lattice.basis().inverse().transpose(),
                 lattice.label().empty() ? "" : lattice.label() + "^adjoint");
}

ProductLattice scale_time_frequency(const ProductLattice& lattice, double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) throw Error(ErrorCode::invalid_argument, "sigma must be positive");
  return ProductLattice(lattice.left, lattice.right.scaled(std::numbers::pi / (2 * sigma)));
}

Lattice scale_frequency_half(const Lattice& lattice, double factor) {
  if (lattice.dim() % 2 != 0) throw Error(ErrorCode::dimension, "time-frequency lattice requires even dimension");
  const int n = lattice.dim() / 2;
  Matrix b = lattice.basis();
  b.bottomRows(n) *= factor;
  return Lattice(b, lattice.label());
}

Lattice direct_sum(const Lattice& first, const Lattice& second) {
  const int n = first.dim(), m = second.dim();
  Matrix b = Matrix::Zero(n + m, n + m);
  b.topLeftCorner(n, n) = first.basis();
  b.bottomRightCorner(m, m) = second.basis();
  return Lattice(b);
}

bool unimodular_equivalent(const Lattice& a, const Lattice& b, double tol) {
  if (a.dim() != b.dim()) return false;
  Matrix u = a.basis().fullPivLu().solve(b.basis());
  Matrix rounded = u.array().round().matrix();
  if ((u - rounded).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(std::abs(rounded.determinant()) - 1.0) < 1e-9;
}

Vector reduce_mod(const Lattice& lattice, const Vector& x) {
  Vector c = lattice.basis().fullPivLu().solve(x);
  return x - lattice.basis() * c.array().floor().matrix();
}

bool congruent_mod(const Lattice& lattice, const Vector& a, const Vector& b, double tol) {
  Vector c = lattice.basis().fullPivLu().solve(a - b);
  return (c - c.array().round().matrix()).cwiseAbs().maxCoeff() <= tol;
}

LllResult lll_reduce(const Lattice& lattice, double delta) {
  if (!(delta > 0.25 && delta < 1)) throw Error(ErrorCode::invalid_argument, "LLL parameter must lie in (1/4, 1)");
  const auto n = lattice.basis().cols();
  Matrix b = lattice.basis();
  IntMatrix u = IntMatrix::Identity(n, n);
  auto gs = gram_schmidt(b);
  Eigen::Index k = 1;
  long long iterations = 0;
  while (k < n) {
    if (++iterations > 1'000'000) throw Error(ErrorCode::budget, "LLL did not converge");
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const double q = std::round(gs.mu(k, j));
      if (q != 0) {
        b.col(k) -= q * b.col(j);
        u.col(k) -= static_cast<long long>(q) * u.col(j);
        gs = gram_schmidt(b);
      }
    }
    const double m = gs.mu(k, k - 1);
    if (gs.norms_sq(k) >= (delta - m * m) * gs.norms_sq(k - 1)) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      u.col(k).swap(u.col(k - 1));
      gs = gram_schmidt(b);
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
  return {Lattice(b, lattice.label()), u};
}

bool lovasz_condition_holds(const Matrix& basis, double delta, double tol) {
  auto gs = gram_schmidt(basis);
  for (Eigen::Index k = 1; k < basis.cols(); ++k) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (std::abs(gs.mu(k, j)) > 0.5 + tol) return false;
    }
    const double m = gs.mu(k, k - 1);
    if (gs.norms_sq(k) < (delta - m * m) * gs.norms_sq(k - 1) * (1 + tol)) return false;
  }
  return true;
}

std::vector<Vector> enumerate_ball(const Lattice& lattice, double radius, const Vector& center,
                                   long long node_budget) {
  if (lattice.dim() > kMaxEnumerationDim) {
    throw Error(ErrorCode::budget, "enumeration is limited to dimension 12; pre-reduce or project the lattice");
  }
  if (center.size() != lattice.dim()) throw Error(ErrorCode::dimension, "center dimension mismatch");
  if (!(radius >= 0)) return {};
  const Matrix reduced = lll_reduce(lattice).reduced.basis();
  Enumerator e(reduced, center, radius * radius, node_budget);
  std::vector<Vector> out;
  for (const auto& x : e.run()) out.push_back(reduced * x);
  return out;
}

std::vector<Vector> enumerate_ball(const Lattice& lattice, double radius) {
  return enumerate_ball(lattice, radius, Vector::Zero(lattice.dim()));
}

ShortestVector shortest_vector(const Lattice& lattice) {
  if (lattice.dim() > kMaxEnumerationDim) {
    throw Error(ErrorCode::budget, "shortest-vector search is limited to dimension 12; pre-reduce the basis");
  }
  const Matrix reduced = lll_reduce(lattice).reduced.basis();
  double radius = reduced.colwise().norm().minCoeff();
  Enumerator e(reduced, Vector::Zero(lattice.dim()), radius * radius * (1 + 1e-9), 50'000'000);
  auto coeffs = e.run();
  Vector best;
  double best_sq = std::numeric_limits<double>::infinity();
  for (const auto& x : coeffs) {
    if (x.cwiseAbs().maxCoeff() == 0) continue;
    Vector v = reduced * x;
    const double sq = v.squaredNorm();
    if (best.size() == 0 || sq < best_sq * (1 - 1e-10)) {
      best = v;
      best_sq = sq;
    } else if (std::abs(sq - best_sq) <= 1e-10 * best_sq && lex_greater(v, best)) {
      best = v;
      best_sq = std::min(sq, best_sq);
    }
  }
  if (best.size() == 0) throw Error(ErrorCode::internal, "enumeration found no nonzero vector");
  Vector c = lattice.basis().fullPivLu().solve(best).array().round().matrix();
  return {best, c, std::sqrt(best_sq)};
}

double min_distance_periodic(const PeriodicSet& set) {
  const Lattice& l = set.lattice();
  double best = shortest_vector(l).length;
  const auto& a = set.translations();
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i == j) continue;
      const Vector d = a[i] - a[j];
      for (const auto& p : enumerate_ball(l, best, -d)) {
        const double dist = (p + d).norm();
        if (dist <= 1e-12) throw Error(ErrorCode::degenerate_set, "coincident translations in periodic set");
        best = std::min(best, dist);
      }
    }
  }
  return best;
}

double center_density(const Lattice& lattice) {
  const double ell = shortest_vector(lattice).length;
  return std::pow(ell / 2, lattice.dim()) / lattice.covolume();
}

double center_density(const PeriodicSet& set) {
  const double ell = min_distance_periodic(set);
  return set.size() * std::pow(ell / 2, set.dim()) / set.lattice().covolume();
}

double unit_ball_volume(int m) {
  return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1);
}

const HermiteTable& HermiteTable::known() {
  static const HermiteTable table;
  return table;
}

std::optional<double> HermiteTable::at(int m) const {
  switch (m) {
    case 1: return 1.0;
    case 2: return 2 / std::sqrt(3.0);
    case 3: return std::cbrt(2.0);
    case 4: return std::sqrt(2.0);
    case 5: return std::pow(8.0, 1.0 / 5);
    case 6: return std::pow(64.0 / 3, 1.0 / 6);
    case 7: return std::pow(64.0, 1.0 / 7);
    case 8: return 2.0;
    default: return std::nullopt;
  }
}

double hermite_lower_bound(int m) {
  if (m < 1) throw Error(ErrorCode::dimension, "dimension must be positive");
  return m / (2 * std::numbers::pi * std::numbers::e);
}

std::optional<double> minkowski_hlawka_bound(int m) {
  if (m < 2) return std::nullopt;
  return std::pow(2 * std::riemann_zeta(static_cast<double>(m)) / unit_ball_volume(m), 2.0 / m);
}

CriticalityReport criticality_check(const Lattice& lattice, double tol) {
  CriticalityReport r;
  const int n = lattice.dim();
  r.hermite_constant = HermiteTable::known().at(n);
  const double ell = shortest_vector(lattice).length;
  r.shortest_length_sq = ell * ell;
  if (!r.hermite_constant) return r;
  r.supported = true;
  r.hermite_target = *r.hermite_constant * std::pow(lattice.covolume(), 2.0 / n);
  r.relative_gap = (r.hermite_target - r.shortest_length_sq) / r.hermite_target;
  r.critical = std::abs(r.relative_gap) <= tol;
  return r;
}

LabelDensity label_density(const Lattice& lattice) {
  if (lattice.dim() % 2 != 0) throw Error(ErrorCode::dimension, "label density requires even dimension");
  const int n = lattice.dim() / 2;
  const double vol = lattice.covolume();
  return {unit_ball_volume(2 * n) / (std::pow(2.0, 2 * n) * vol), 1 / vol};
}

double label_density_empirical(const Lattice& lattice, double k) {
  if (lattice.dim() % 2 != 0) throw Error(ErrorCode::dimension, "label density requires even dimension");
  const auto count = enumerate_ball(lattice, k).size();
  return static_cast<double>(count) / std::pow(2 * k, lattice.dim());
}

}  // namespace cegabor
