#pragma once

#include <map>
#include <string>

#include "cegabor/cohn_elkies.hpp"
#include "cegabor/lattice.hpp"
#include "cegabor/multiplicity.hpp"

namespace cegabor::testing {

// Cartan matrices of the root systems A1, A2, A3, D4, D5, E6, E7, E8.
IntMatrix cartan_matrix(const std::string& name);
// Basis R with R^T R equal to the Cartan matrix (Cholesky factor).
Lattice root_lattice(const std::string& name);
// Exact integer determinant by fraction-free elimination.
long long exact_determinant(const IntMatrix& m);
// Hermite invariant of an even integral Gram matrix containing a root (norm 2 vector):
// the minimum is exactly 2, so gamma = 2 / det^{1/m}.
double even_gram_hermite(const IntMatrix& gram);

Lattice hexagonal(double covolume = 1);

struct BruteShortest {
  Vector vector;
  Vector coefficients;
  double length_sq = 0;
};

// Minimum over all nonzero coefficient vectors with sup-norm <= bound.
BruteShortest brute_force_shortest(const Lattice& lattice, int bound);
// Minimum of ||l + a_i - a_j|| over l with coefficients in [-bound, bound]^n, excluding zero.
double brute_force_periodic_distance(const PeriodicSet& set, int bound);

// Multiset union of the quadrant/ordering construction, built pattern by pattern.
std::map<IndexVector, int> literal_quadrant_counts(int dim, int omega);

// 1 + 4 sum_l mu_l e^{-a |T l|^2} + 4 sum_{l, l'} mu_l mu_l' e^{-a |T(l + l')|^2} by explicit double loop.
double brute_upsilon(double decay, const MultiplicityMap& mu, const Matrix& basis);

// 2 sin((2N+1) pi x) / sin(pi x) - 1 for the all-ones multiplicities on {-N..N} \ {0}.
double all_ones_kernel(int n_max, double x);

// f evaluated by expanding D^2 into exponentials over all index pairs.
double f_product_to_sum(const CEFunction& ce, const Vector& x);

}  // namespace cegabor::testing
