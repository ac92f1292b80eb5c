#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cegabor/lattice.hpp"
#include "cegabor/multiplicity.hpp"

namespace cegabor {

// consistent: cutoff decay pi^2/(4 sigma), sign change at the dual minimum.
// literal: cutoff decay pi^2/(4 sigma^2), sign change at sqrt(sigma) times the dual minimum.
enum class CutoffConvention { consistent, literal };

const char* to_string(CutoffConvention convention);
CutoffConvention parse_convention(const std::string& name);

struct SquareTerm {
  IndexVector index;  // l, or l + l'
  Vector shift;       // translation_basis * index
  double weight;      // accumulated 1, 4 mu_l, 4 mu_l mu_l'
};

// D(x) = 1 + 2 sum_l mu_l cos(2 pi <T l, x>) with T the translation basis.
class DirichletKernel {
 public:
  explicit DirichletKernel(MultiplicityMap mu, std::optional<Matrix> translation_basis = {});

  double operator()(const Vector& x) const;
  const MultiplicityMap& multiplicities() const { return mu_; }
  const Matrix& translation_basis() const { return basis_; }
  // Terms of D(x)^2 = sum_t weight_t exp(2 pi i <shift_t, x>), merged by index, sorted by index.
  const std::vector<SquareTerm>& square_terms() const { return square_; }

 private:
  MultiplicityMap mu_;
  Matrix basis_;
  std::vector<std::pair<Vector, double>> cos_terms_;
  std::vector<SquareTerm> square_;
};

double dirichlet_kernel(const MultiplicityMap& mu, const Vector& x);

// 1 + 4 sum mu_l exp(-a |T l|^2) + 4 sum mu_l mu_l' exp(-a |T(l + l')|^2)
double upsilon(double decay, const MultiplicityMap& mu, const std::optional<Matrix>& translation_basis = {});
double upsilon_limit(const MultiplicityMap& mu, const std::optional<Matrix>& translation_basis = {});

class CEFunction {
 public:
  // separation is the minimal distance of the probed packing; it fixes the cutoff constant.
  CEFunction(Lattice lattice, Matrix k_basis, double alpha, double sigma, MultiplicityMap mu,
             CutoffConvention convention, double separation);

  int dim() const { return lattice_.dim(); }
  const Lattice& lattice() const { return lattice_; }
  Lattice dual_lattice() const { return dual(lattice_); }
  const Matrix& k_basis() const { return k_basis_; }
  double alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  double beta_cutoff() const { return beta_; }
  double cutoff_constant() const { return cutoff_; }
  double det_factor() const { return det_factor_; }
  double separation() const { return separation_; }
  double size() const { return size_; }
  CutoffConvention convention() const { return convention_; }
  const DirichletKernel& kernel() const { return kernel_; }
  const MultiplicityMap& multiplicities() const { return kernel_.multiplicities(); }

  double f(const Vector& x) const;
  double ft(const Vector& xi) const;

  // (pi^2 / (beta alpha + pi^2))^{n/2} and alpha pi^2 / (beta alpha + pi^2)
  double convolution_scale() const;
  double mixed_decay() const;
  double max_shift() const;

  // Same declared size, different cutoff constant.
  CEFunction with_cutoff_constant(double cutoff) const;

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  Lattice lattice_;
  Matrix k_basis_;
  double alpha_;
  double sigma_;
  CutoffConvention convention_;
  double separation_;
  double beta_;
  double cutoff_;
  double size_;
  double det_factor_;
  DirichletKernel kernel_;
  std::vector<std::string> warnings_;
};

double cutoff_decay(double sigma, CutoffConvention convention);

// No range or norm checks; the multiplicity map must be symmetric.
CEFunction make_ce(const Lattice& l, const Lattice& k, double alpha, double sigma, const MultiplicityMap& mu,
                   CutoffConvention convention = CutoffConvention::consistent);

CEFunction build_ce(const Lattice& l, const Lattice& k, double alpha, double sigma, int omega,
                    CutoffConvention convention = CutoffConvention::consistent);

double eval_f(const CEFunction& ce, const Vector& x);
double eval_ft(const CEFunction& ce, const Vector& xi);

struct ParameterRangeReport {
  bool simple_pass = false;
  double simple_margin = 0;  // q pi - alpha
  double q = 0;
  bool log_pass = false;
  double log_margin = 0;     // sigma beta Xi^{1/2n} / (pi e) - log(1 + beta alpha / pi^2)
};

ParameterRangeReport parameter_range(double alpha, double sigma, double xi, int dim, double beta);

struct GridOptions {
  int angular = 72;
  int random_directions = 64;
  int radial_per_size = 50;
  double tail = 1e-14;
  double sign_extent = 10;
  std::uint64_t seed = 0;
};

std::vector<Vector> grid_directions(int dim, const GridOptions& options);

struct AnalyticFtCriterion {
  bool pass = false;
  double margin = 0;  // convolution scale - cutoff constant
};

struct FtNonnegReport {
  AnalyticFtCriterion analytic;
  double grid_min = 0;
  bool grid_pass = false;
  double tolerance = 1e-12;
  std::size_t grid_points = 0;
  double max_radius = 0;
};

struct SignReport {
  bool symbolic = false;
  double grid_max = 0;
  bool grid_pass = false;
  double tolerance = 1e-12;
  std::size_t grid_points = 0;
};

AnalyticFtCriterion analytic_ft_criterion(const CEFunction& ce);
// Factorization argument: D^2 psi >= 0 and the cutoff factor changes sign exactly at the size.
bool symbolic_sign_check(const CEFunction& ce);
FtNonnegReport verify_ft_nonneg(const CEFunction& ce, const GridOptions& options = {}, double tolerance = 1e-12);
SignReport verify_sign(const CEFunction& ce, const GridOptions& options = {}, double tolerance = 1e-12);

struct ZeroValues {
  double f0 = 0;
  double ft0 = 0;
};

ZeroValues ce_values_at_zero(const CEFunction& ce);

struct BoundReport {
  double size = 0;
  double bound = 0;
  double center_density = 0;
  double ratio = 0;
  double f0 = 0;
  double ft0 = 0;
};

BoundReport ce_bound(const CEFunction& ce);

struct SpecialnessReport {
  double ratio_residual = 0;     // f(0)/Ff(0) - 1/|L^dual|
  double expanded_lhs = 0;
  double expanded_rhs = 0;
  double expanded_residual = 0;  // lhs - rhs
  bool zero_sets_agree = true;
  double tolerance = 1e-9;
};

SpecialnessReport specialness_residual(const CEFunction& ce, double tolerance = 1e-9);

struct PoissonReport {
  double residual = 0;
  double lattice_sum = 0;
  double dual_sum = 0;
  double radius = 0;
};

double poisson_radius(const CEFunction& ce, double tail = 1e-12);
PoissonReport poisson_residual(const CEFunction& ce, const Lattice& probe, double radius);

struct ZeroCheckReport {
  double max_f = 0;
  double max_ft = 0;
  double special_residual = 0;
  bool special_consistent = false;
  double tolerance = 1e-9;
};

ZeroCheckReport zero_check(const CEFunction& ce, const Lattice& probe, double radius, double tolerance = 1e-9);

struct Tolerances {
  double sign_grid = 1e-12;
  double ft_grid = 1e-12;
  double special = 1e-9;
  double imag = 1e-10;
};

struct WindowResidual {
  Vector translation;
  double weight = 0;
  double max_imag = 0;  // largest |Im| of the single-window contribution on the grid
};

struct CEReport {
  int dim = 0;
  int omega = 0;
  MultiplicityStrategy strategy = MultiplicityStrategy::quadrant_symmetric;
  CutoffConvention convention = CutoffConvention::consistent;
  double alpha = 0, sigma = 0, beta_cutoff = 0, cutoff_constant = 0, det_factor = 0;
  double separation = 0;
  BoundReport bound;
  SignReport sign;
  FtNonnegReport ft;
  ParameterRangeReport range;
  SpecialnessReport special;
  PoissonReport poisson;
  bool sign_ok = false;
  bool ft_zero_positive = false;
  Tolerances tolerances;
  std::vector<std::string> warnings;

  bool periodic = false;
  int translations = 1;
  double imag_residual = 0;
  std::vector<WindowResidual> windows;
};

CEReport verify_ce(const CEFunction& ce, const GridOptions& options = {}, const Tolerances& tol = {});

}  // namespace cegabor
