#pragma once

#include <complex>
#include <vector>

#include "cegabor/cohn_elkies.hpp"

namespace cegabor {

PeriodicSet sigma_dual(const PeriodicSet& set);

struct MultiwindowCondition {
  bool pass = false;
  double margin = 0;  // N - |det A| |det B|
};

MultiwindowCondition multiwindow_necessary(const Matrix& a, const Matrix& b, int count);

struct PhaseWindow {
  Vector translation;
  double weight = 1;
  int source = 0;  // index into the set's translations
};

class PeriodicCEFunction {
 public:
  PeriodicCEFunction(PeriodicSet set, CEFunction base, std::vector<PhaseWindow> windows);

  const PeriodicSet& set() const { return set_; }
  const CEFunction& base() const { return base_; }
  const std::vector<PhaseWindow>& windows() const { return windows_; }
  int dim() const { return set_.dim(); }
  double size() const { return base_.size(); }

  std::complex<double> window_value(std::size_t j, const Vector& x) const;
  std::complex<double> f_complex(const Vector& x) const;
  double f(const Vector& x) const { return f_complex(x).real(); }
  double ft(const Vector& xi) const;
  double phase_sum(const Vector& x) const;

 private:
  PeriodicSet set_;
  CEFunction base_;
  std::vector<PhaseWindow> windows_;
};

// Pairs every translation with the exact negative of a congruent representative; self-paired
// translations are split into two half-weight windows.
std::vector<PhaseWindow> symmetric_windows(const PeriodicSet& set);

PeriodicCEFunction build_ce_periodic(const PeriodicSet& set, const Lattice& k, double alpha, double sigma, int omega,
                                     CutoffConvention convention = CutoffConvention::consistent);

PoissonReport periodic_poisson_residual(const PeriodicCEFunction& pce, double radius);

CEReport verify_ce_periodic(const PeriodicCEFunction& pce, const GridOptions& options = {},
                            const Tolerances& tol = {});

}  // namespace cegabor
