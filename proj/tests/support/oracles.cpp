#include "oracles.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cegabor::testing {

namespace {

constexpr double pi = std::numbers::pi;

IntMatrix chain_cartan(int n) {
  IntMatrix m = IntMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2;
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = -1;
  }
  return m;
}

void link(IntMatrix& m, int i, int j) { m(i, j) = m(j, i) = -1; }

IntMatrix empty_cartan(int n) {
  IntMatrix m = IntMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 2;
  return m;
}

// Odometer over [-bound, bound]^n.
bool next_coefficients(IndexVector& c, int bound) {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    if (c[i] < bound) {
      ++c[i];
      return true;
    }
    c[i] = -bound;
  }
  return false;
}

}  // namespace

IntMatrix cartan_matrix(const std::string& name) {
  if (name == "A1") return chain_cartan(1);
  if (name == "A2") return chain_cartan(2);
  if (name == "A3") return chain_cartan(3);
  if (name == "D4" || name == "D5") {
    const int n = name == "D4" ? 4 : 5;
    IntMatrix m = empty_cartan(n);
    for (int i = 0; i + 1 < n - 1; ++i) link(m, i, i + 1);
    link(m, n - 3, n - 1);
    return m;
  }
  if (name == "E6" || name == "E7" || name == "E8") {
    const int n = name == "E6" ? 6 : name == "E7" ? 7 : 8;
    // Chain 0-1-...-(n-2) with node n-1 attached to node 2.
    IntMatrix m = empty_cartan(n);
    for (int i = 0; i + 1 < n - 1; ++i) link(m, i, i + 1);
    link(m, 2, n - 1);
    return m;
  }
  throw std::invalid_argument("unknown root system " + name);
}

Lattice root_lattice(const std::string& name) {
  const Matrix gram = cartan_matrix(name).cast<double>();
  Eigen::LLT<Matrix> llt(gram);
  const Matrix r = llt.matrixU();
  return Lattice(r, name);
}

long long exact_determinant(const IntMatrix& input) {
  IntMatrix m = input;
  const int n = static_cast<int>(m.rows());
  long long sign = 1, prev = 1;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    while (pivot < n && m(pivot, k) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      m.row(pivot).swap(m.row(k));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

double even_gram_hermite(const IntMatrix& gram) {
  const int m = static_cast<int>(gram.rows());
  bool has_root = false;
  for (int i = 0; i < m; ++i) {
    if (gram(i, i) % 2 != 0) throw std::invalid_argument("Gram matrix is not even");
    if (gram(i, i) == 2) has_root = true;
  }
  if (!has_root) throw std::invalid_argument("Gram matrix has no norm-2 basis vector");
  const long long det = exact_determinant(gram);
  if (det <= 0) throw std::invalid_argument("Gram matrix is not positive definite");
  return 2.0 / std::pow(static_cast<double>(det), 1.0 / m);
}

Lattice hexagonal(double covolume) {
  const double a = std::sqrt(2 * covolume / std::sqrt(3.0));
  Matrix b(2, 2);
  b << a, a / 2, 0, a * std::sqrt(3.0) / 2;
  return Lattice(b, "hexagonal");
}

BruteShortest brute_force_shortest(const Lattice& lattice, int bound) {
  const int n = lattice.dim();
  BruteShortest best;
  best.length_sq = std::numeric_limits<double>::infinity();
  IndexVector c(n, -bound);
  do {
    bool zero = true;
    Vector coeff(n);
    for (int i = 0; i < n; ++i) {
      coeff(i) = c[i];
      zero = zero && c[i] == 0;
    }
    if (zero) continue;
    const Vector v = lattice.basis() * coeff;
    const double len = v.squaredNorm();
    if (len < best.length_sq) best = {v, coeff, len};
  } while (next_coefficients(c, bound));
  return best;
}

double brute_force_periodic_distance(const PeriodicSet& set, int bound) {
  const int n = set.dim();
  double best = std::numeric_limits<double>::infinity();
  IndexVector c(n, -bound);
  do {
    Vector coeff(n);
    for (int i = 0; i < n; ++i) coeff(i) = c[i];
    const Vector l = set.lattice().basis() * coeff;
    for (const auto& a : set.translations()) {
      for (const auto& b : set.translations()) {
        const double d = (l + a - b).norm();
        if (d > 1e-12) best = std::min(best, d);
      }
    }
  } while (next_coefficients(c, bound));
  return best;
}

std::map<IndexVector, int> literal_quadrant_counts(int dim, int omega) {
  const int patterns = 1 << dim;
  // Pattern p has sign +1 in slot j when bit (dim-1-j) is set; integer order equals
  // lexicographic order with - < +.
  auto pattern_of = [&](const IndexVector& k) {
    int p = 0;
    for (int j = 0; j < dim; ++j) p = 2 * p + (k[j] >= 0 ? 1 : 0);
    return p;
  };
  std::vector<IndexVector> box;
  IndexVector k(dim, -omega);
  do {
    box.push_back(k);
  } while (next_coefficients(k, omega));

  std::map<IndexVector, int> counts;
  for (int eps = 0; eps < patterns; ++eps) {
    for (int i = 0; i < dim; ++i) {
      // Quadrants strictly above eps, each point once.
      for (int above = eps + 1; above < patterns; ++above) {
        for (const auto& p : box) {
          if (pattern_of(p) == above) counts[p] += 1;
        }
      }
      // Y_eps(F_i): F_i = {k : k_i >= 1, k_j = 0 for j > i}, reflected by the sign pattern.
      for (const auto& p : box) {
        bool in_f = p[i] >= 1;
        for (int j = i + 1; j < dim; ++j) in_f = in_f && p[j] == 0;
        if (!in_f) continue;
        IndexVector y(dim);
        for (int j = 0; j < dim; ++j) {
          const int sign = (eps >> (dim - 1 - j)) & 1 ? 1 : -1;
          y[j] = sign * p[j];
        }
        counts[y] += 1;
      }
    }
  }
  return counts;
}

double brute_upsilon(double decay, const MultiplicityMap& mu, const Matrix& basis) {
  auto shift = [&](const IndexVector& k) {
    Vector v(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) v(static_cast<Eigen::Index>(i)) = k[i];
    return Vector(basis * v);
  };
  double sum = 1;
  for (const auto& [l, m] : mu.entries()) sum += 4.0 * m * std::exp(-decay * shift(l).squaredNorm());
  for (const auto& [l, m] : mu.entries()) {
    for (const auto& [lp, mp] : mu.entries()) {
      sum += 4.0 * m * mp * std::exp(-decay * (shift(l) + shift(lp)).squaredNorm());
    }
  }
  return sum;
}

double all_ones_kernel(int n_max, double x) {
  const double s = std::sin(pi * x);
  if (std::abs(s) < 1e-14) return 2.0 * (2 * n_max + 1) - 1;
  return 2 * std::sin((2 * n_max + 1) * pi * x) / s - 1;
}

double f_product_to_sum(const CEFunction& ce, const Vector& x) {
  const int n = ce.dim();
  const Matrix& basis = ce.lattice().basis();
  // D(x) = sum_k c_k e^{2 pi i <T k, x>} with c_0 = 1 and c_l = 2 mu_l for symmetric mu.
  std::vector<std::pair<Vector, double>> terms;
  terms.emplace_back(Vector::Zero(n), 1.0);
  for (const auto& [l, m] : ce.multiplicities().entries()) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = l[i];
    terms.emplace_back(basis * v, 2.0 * m);
  }
  std::complex<double> d2 = 0;
  for (const auto& [s1, c1] : terms) {
    for (const auto& [s2, c2] : terms) d2 += c1 * c2 * std::polar(1.0, 2 * pi * (s1 + s2).dot(x));
  }
  const double r2 = x.squaredNorm();
  const double psi = std::pow(pi / ce.alpha(), n / 2.0) * std::exp(-pi * pi * r2 / ce.alpha());
  const double h = std::exp(-ce.beta_cutoff() * r2) - ce.cutoff_constant();
  return ce.det_factor() * d2.real() * psi * h;
}

}  // namespace cegabor::testing
