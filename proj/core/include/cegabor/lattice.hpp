#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cegabor/types.hpp"

namespace cegabor {

// Full-rank lattice basis * Z^n. Columns of the basis are the generators.
class Lattice {
 public:
  explicit Lattice(Matrix basis, std::string label = {});

  static Lattice integer(int n);

  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  const std::string& label() const { return label_; }
  double covolume() const;
  Vector point(const Eigen::VectorXd& coefficients) const { return basis_ * coefficients; }

  Lattice scaled(double factor) const;
  Lattice with_label(std::string label) const;

 private:
  Matrix basis_;
  std::string label_;
};

struct ProductLattice {
  Lattice left;   // time side
  Lattice right;  // frequency side

  ProductLattice(Lattice l, Lattice r);
  int half_dim() const { return left.dim(); }
  Lattice combined() const;
  double covolume() const { return left.covolume() * right.covolume(); }
};

class PeriodicSet {
 public:
  PeriodicSet(Lattice lattice, std::vector<Vector> translations);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<Vector>& translations() const { return translations_; }
  int size() const { return static_cast<int>(translations_.size()); }
  int dim() const { return lattice_.dim(); }

 private:
  Lattice lattice_;
  std::vector<Vector> translations_;
};

// Symplectic block matrix [[0, I], [-I, 0]] in dimension 2n.
Matrix symplectic_j(int n);

Lattice dual(const Lattice& lattice);
Lattice adjoint(const Lattice& lattice);
ProductLattice scale_time_frequency(const ProductLattice& lattice, double sigma);
// Scales the frequency half of a 2n-dimensional lattice by factor.
Lattice scale_frequency_half(const Lattice& lattice, double factor);
// Lattice K x L as a block-diagonal 2n-dimensional lattice.
Lattice direct_sum(const Lattice& first, const Lattice& second);

bool unimodular_equivalent(const Lattice& a, const Lattice& b, double tol = 1e-8);
// Reduces x modulo the lattice into the half-open fundamental parallelepiped.
Vector reduce_mod(const Lattice& lattice, const Vector& x);
bool congruent_mod(const Lattice& lattice, const Vector& a, const Vector& b, double tol = 1e-9);

struct LllResult {
  Lattice reduced;
  IntMatrix transform;  // reduced.basis = original.basis * transform
};

LllResult lll_reduce(const Lattice& lattice, double delta = 0.99);
bool lovasz_condition_holds(const Matrix& basis, double delta, double tol = 1e-9);

struct ShortestVector {
  Vector vector;
  Vector coefficients;
  double length;
};

ShortestVector shortest_vector(const Lattice& lattice);

// Lattice points v with ||v - center|| <= radius. Deterministic order.
std::vector<Vector> enumerate_ball(const Lattice& lattice, double radius,
                                   const Vector& center, long long node_budget = 50'000'000);
std::vector<Vector> enumerate_ball(const Lattice& lattice, double radius);

double min_distance_periodic(const PeriodicSet& set);

double center_density(const Lattice& lattice);
double center_density(const PeriodicSet& set);

double unit_ball_volume(int m);

class HermiteTable {
 public:
  static const HermiteTable& known();
  std::optional<double> at(int m) const;
  int max_dim() const { return 8; }
};

double hermite_lower_bound(int m);
std::optional<double> minkowski_hlawka_bound(int m);

struct CriticalityReport {
  bool supported = false;
  bool critical = false;
  double shortest_length_sq = 0;
  double hermite_target = 0;  // gamma_n * |L|^{2/n}
  double relative_gap = 0;
  std::optional<double> hermite_constant;
};

CriticalityReport criticality_check(const Lattice& lattice, double tol = 1e-8);

struct LabelDensity {
  double closed_form = 0;            // Vol(B_1^{2n}) / (2^{2n} |Lambda|)
  double classical_redundancy = 0;   // 1 / |Lambda|
};

LabelDensity label_density(const Lattice& lattice);
double label_density_empirical(const Lattice& lattice, double k);

}  // namespace cegabor
