#include "cegabor/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cegabor/error.hpp"
#include "cegabor/wexler_raz.hpp"

namespace cegabor {

namespace {

using std::numbers::pi;
using Complex = std::complex<double>;

bool in_lattice(const Lattice& l, const Vector& v) { return congruent_mod(l, v, Vector::Zero(v.size())); }

// sum_t w_t exp(-decay |a + shift_t|^2)
double shifted_upsilon(const CEFunction& ce, const Vector& a, double decay) {
  double sum = 0;
  for (const auto& t : ce.kernel().square_terms()) sum += t.weight * std::exp(-decay * (a + t.shift).squaredNorm());
  return sum;
}

double max_translation(const std::vector<PhaseWindow>& windows) {
  double m = 0;
  for (const auto& w : windows) m = std::max(m, w.translation.norm());
  return m;
}

}  // namespace

PeriodicSet sigma_dual(const PeriodicSet& set) { return PeriodicSet(dual(set.lattice()), set.translations()); }

MultiwindowCondition multiwindow_necessary(const Matrix& a, const Matrix& b, int count) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error(ErrorCode::dimension, "A and B must be square matrices of equal size");
  }
  MultiwindowCondition c;
  c.margin = count - std::abs(a.determinant()) * std::abs(b.determinant());
  c.pass = c.margin > 0;
  return c;
}

std::vector<PhaseWindow> symmetric_windows(const PeriodicSet& set) {
  const auto& a = set.translations();
  const Lattice& l = set.lattice();
  std::vector<bool> used(a.size(), false);
  std::vector<PhaseWindow> windows;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (used[j]) continue;
    used[j] = true;
    if (in_lattice(l, a[j])) {
      windows.push_back({Vector::Zero(a[j].size()), 1.0, static_cast<int>(j)});
      continue;
    }
    if (in_lattice(l, 2 * a[j])) {
      windows.push_back({a[j], 0.5, static_cast<int>(j)});
      windows.push_back({-a[j], 0.5, static_cast<int>(j)});
      continue;
    }
    std::size_t partner = a.size();
    for (std::size_t k = j + 1; k < a.size(); ++k) {
      if (!used[k] && congruent_mod(l, a[k], -a[j])) {
        partner = k;
        break;
      }
    }
    if (partner == a.size()) {
      throw Error(ErrorCode::asymmetric_translations,
                  "translation " + std::to_string(j) +
                      " has no negative modulo the lattice; the summed phases exp(2 pi i <a_j, x>) would not be real");
    }
    used[partner] = true;
    windows.push_back({a[j], 1.0, static_cast<int>(j)});
    windows.push_back({-a[j], 1.0, static_cast<int>(partner)});
  }
  return windows;
}

PeriodicCEFunction::PeriodicCEFunction(PeriodicSet set, CEFunction base, std::vector<PhaseWindow> windows)
    : set_(std::move(set)), base_(std::move(base)), windows_(std::move(windows)) {
  if (windows_.empty()) throw Error(ErrorCode::invalid_argument, "periodic CE function needs at least one window");
}

Complex PeriodicCEFunction::window_value(std::size_t j, const Vector& x) const {
  const auto& w = windows_.at(j);
  return w.weight * std::polar(1.0, 2 * pi * w.translation.dot(x)) * base_.f(x);
}

Complex PeriodicCEFunction::f_complex(const Vector& x) const {
  Complex phase = 0;
  for (const auto& w : windows_) phase += w.weight * std::polar(1.0, 2 * pi * w.translation.dot(x));
  return phase * base_.f(x);
}

double PeriodicCEFunction::phase_sum(const Vector& x) const {
  double s = 0;
  for (const auto& w : windows_) s += w.weight * std::cos(2 * pi * w.translation.dot(x));
  return s;
}

double PeriodicCEFunction::ft(const Vector& xi) const {
  double s = 0;
  for (const auto& w : windows_) s += w.weight * base_.ft(xi - w.translation);
  return s;
}

PeriodicCEFunction build_ce_periodic(const PeriodicSet& set, const Lattice& k, double alpha, double sigma, int omega,
                                     CutoffConvention convention) {
  const Lattice& l = set.lattice();
  if (l.dim() != k.dim()) throw Error(ErrorCode::dimension, "L and K must have equal dimension");
  if (std::abs(l.covolume() - 1) > 1e-8) {
    throw Error(ErrorCode::invalid_lattice, "periodic runs expect a lattice of covolume 1");
  }
  const auto frame = multiwindow_necessary(l.basis(), k.basis(), set.size());
  if (!frame.pass) {
    throw Error(ErrorCode::frame_condition,
                "multi-window condition det(A) det(B) < N fails with margin " + std::to_string(frame.margin));
  }
  const auto cond = chrkim_norm_condition(l.basis(), k.basis(), omega);
  if (!cond.pass) {
    throw Error(ErrorCode::norm_condition, "norm condition fails with margin " + std::to_string(cond.margin));
  }
  const auto range = parameter_range(alpha, sigma, 1.0, l.dim(), cutoff_decay(sigma, convention));
  if (!range.simple_pass) {
    throw Error(ErrorCode::parameter_range, "alpha exceeds q*pi (margin " + std::to_string(range.simple_margin) + ")");
  }
  auto windows = symmetric_windows(set);
  const double separation = min_distance_periodic(sigma_dual(set));
  auto mu = build_multiplicity(l.dim(), omega, MultiplicityStrategy::quadrant_symmetric);
  CEFunction base(l, k.basis(), alpha, sigma, mu, convention, separation);
  return PeriodicCEFunction(set, std::move(base), std::move(windows));
}

PoissonReport periodic_poisson_residual(const PeriodicCEFunction& pce, double radius) {
  const Lattice dual_l = dual(pce.set().lattice());
  const auto& a = pce.set().translations();
  PoissonReport p;
  p.radius = radius;
  for (const auto& ai : a) {
    for (const auto& aj : a) {
      const Vector d = ai - aj;
      for (const auto& v : enumerate_ball(dual_l, radius, -d)) p.lattice_sum += pce.f(v + d);
    }
  }
  for (const auto& w : enumerate_ball(pce.set().lattice(), radius)) {
    Complex phase = 0;
    for (const auto& aj : a) phase += std::polar(1.0, 2 * pi * aj.dot(w));
    p.dual_sum += pce.ft(w) * std::norm(phase);
  }
  p.dual_sum /= dual_l.covolume();
  p.residual = std::abs(p.lattice_sum - p.dual_sum);
  return p;
}

CEReport verify_ce_periodic(const PeriodicCEFunction& pce, const GridOptions& options, const Tolerances& tol) {
  const CEFunction& ce = pce.base();
  const int n = pce.dim();
  const int count = pce.set().size();
  CEReport r;
  r.dim = n;
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
  r.periodic = true;
  r.translations = count;

  const double dual_covolume = dual(pce.set().lattice()).covolume();
  const double density_scale = count / dual_covolume;
  const double c = ce.cutoff_constant();
  const Vector origin = Vector::Zero(n);

  double weight_sum = 0, weight_at_origin = 0;
  for (const auto& w : pce.windows()) {
    weight_sum += w.weight;
    if (w.translation.squaredNorm() == 0) weight_at_origin += w.weight;
  }
  const double upsilon0 = shifted_upsilon(ce, origin, 0);
  const double f0 = weight_sum * (1 - c) * ce.det_factor() * std::pow(pi / ce.alpha(), n / 2.0) * upsilon0;
  double ft_mixed = 0, ft_alpha = 0;
  for (const auto& w : pce.windows()) {
    ft_mixed += w.weight * shifted_upsilon(ce, w.translation, ce.mixed_decay());
    ft_alpha += w.weight * shifted_upsilon(ce, w.translation, ce.alpha());
  }
  const double ft0 = ce.det_factor() * (ce.convolution_scale() * ft_mixed - c * ft_alpha);

  r.ft_zero_positive = ft0 > 0;
  r.bound.size = ce.size();
  r.bound.f0 = f0;
  r.bound.ft0 = ft0;
  r.bound.center_density = count * std::pow(ce.separation() / 2, n) / dual_covolume;
  r.bound.bound = r.ft_zero_positive ? std::pow(ce.size() / 2, n) * f0 / ft0 : std::numeric_limits<double>::quiet_NaN();
  r.bound.ratio = r.bound.bound / r.bound.center_density;

  const auto dirs = grid_directions(n, options);
  const double step = ce.size() / options.radial_per_size;

  r.sign.tolerance = tol.sign_grid;
  r.sign.symbolic = symbolic_sign_check(ce) &&
                    weight_at_origin >= weight_sum - weight_at_origin;
  r.sign.grid_max = -std::numeric_limits<double>::infinity();
  const auto sign_steps = static_cast<long long>(std::ceil(options.sign_extent / step));
  for (const auto& dir : dirs) {
    for (long long i = 0; i <= sign_steps; ++i) {
      r.sign.grid_max = std::max(r.sign.grid_max, pce.f(dir * (ce.size() + step * static_cast<double>(i))));
      ++r.sign.grid_points;
    }
  }
  r.sign.grid_pass = r.sign.grid_max <= tol.sign_grid;
  r.sign_ok = r.sign.symbolic && r.sign.grid_pass;

  r.ft.analytic = analytic_ft_criterion(ce);
  r.ft.tolerance = tol.ft_grid;
  const double decay = std::min(ce.mixed_decay(), ce.alpha());
  r.ft.max_radius = ce.max_shift() + max_translation(pce.windows()) + std::sqrt(-std::log(options.tail) / decay);
  const auto ft_steps = static_cast<long long>(std::ceil(r.ft.max_radius / step));
  r.ft.grid_min = pce.ft(origin);
  r.ft.grid_points = 1;
  for (const auto& dir : dirs) {
    for (long long i = 1; i <= ft_steps; ++i) {
      r.ft.grid_min = std::min(r.ft.grid_min, pce.ft(dir * (step * static_cast<double>(i))));
      ++r.ft.grid_points;
    }
  }
  r.ft.grid_pass = r.ft.grid_min >= -tol.ft_grid;

  for (const auto& w : pce.windows()) r.windows.push_back({w.translation, w.weight, 0.0});
  const auto imag_steps = static_cast<long long>(std::ceil((ce.size() + options.sign_extent) / step));
  for (const auto& dir : dirs) {
    for (long long i = 0; i <= imag_steps; ++i) {
      const Vector x = dir * (step * static_cast<double>(i));
      r.imag_residual = std::max(r.imag_residual, std::abs(pce.f_complex(x).imag()));
      for (std::size_t j = 0; j < r.windows.size(); ++j) {
        r.windows[j].max_imag = std::max(r.windows[j].max_imag, std::abs(pce.window_value(j, x).imag()));
      }
    }
  }

  r.range = parameter_range(ce.alpha(), ce.sigma(), 1.0, n, ce.beta_cutoff());

  r.special.tolerance = tol.special;
  r.special.ratio_residual = f0 / ft0 - density_scale;
  r.special.expanded_lhs = weight_sum * upsilon0 * (1 - c) * std::pow(pi / ce.alpha(), n / 2.0) +
                           c * density_scale * ft_alpha;
  r.special.expanded_rhs = density_scale * ce.convolution_scale() * ft_mixed;
  r.special.expanded_residual = r.special.expanded_lhs - r.special.expanded_rhs;
  r.special.zero_sets_agree = (std::abs(r.special.ratio_residual) <= tol.special) ==
                              (std::abs(r.special.expanded_residual) <= tol.special);

  r.poisson = periodic_poisson_residual(pce, poisson_radius(ce) + 2 * max_translation(pce.windows()));
  return r;
}

}  // namespace cegabor
