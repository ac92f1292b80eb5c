#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "cegabor/cohn_elkies.hpp"
#include "cegabor/gaussian.hpp"
#include "cegabor/multiplicity.hpp"
#include "cegabor/wexler_raz.hpp"

namespace cegabor {
namespace {

Lattice e8() {
  Matrix basis = Matrix::Zero(8, 8);
  basis(0, 0) = 2;
  for (int i = 1; i < 7; ++i) {
    basis(i - 1, i) = -1;
    basis(i, i) = 1;
  }
  basis.col(7).setConstant(0.5);
  return Lattice(basis, "E8");
}

Lattice hexagonal() {
  Matrix basis(2, 2);
  const double s = std::sqrt(2 / std::sqrt(3.0));
  basis << s, s / 2, 0, s * std::sqrt(3.0) / 2;
  return Lattice(basis);
}

void BM_ShortestVectorE8(benchmark::State& state) {
  const Lattice l = e8();
  for (auto _ : state) benchmark::DoNotOptimize(shortest_vector(l).length);
}
BENCHMARK(BM_ShortestVectorE8);

void BM_Correlation(benchmark::State& state) {
  const Lattice l = ProductLattice(hexagonal(), dual(hexagonal())).combined();
  for (auto _ : state) benchmark::DoNotOptimize(correlation(std::numbers::pi, l).value);
}
BENCHMARK(BM_Correlation);

void BM_BuildMultiplicity(benchmark::State& state) {
  const int omega = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_multiplicity(3, omega, MultiplicityStrategy::quadrant_symmetric).total());
}
BENCHMARK(BM_BuildMultiplicity)->Arg(1)->Arg(2)->Arg(3);

void BM_EvalFt(benchmark::State& state) {
  const CEFunction ce = build_ce(dual(hexagonal()), Lattice::integer(2).scaled(0.3), 1.0, 1.0, 1);
  Vector xi(2);
  xi << 0.3, 0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_ft(ce, xi));
    xi(0) += 1e-9;
  }
}
BENCHMARK(BM_EvalFt);

void BM_VerifyBattery(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CEFunction ce = build_ce(Lattice::integer(n), Lattice::integer(n).scaled(0.5), 0.8, 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(verify_ce(ce).sign_ok);
}
BENCHMARK(BM_VerifyBattery)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_DualWindowResiduals(benchmark::State& state) {
  const Matrix c = 2.0 * Matrix::Identity(1, 1);
  const int omega = omega_for_epsilon(0.1, 1e-3, 1);
  const Matrix b = Matrix::Constant(1, 1, 1.0 / (2 * (2 * omega - 1)));
  const DualWindow gamma = build_dual_window(0.1, c, b, omega, MultiplicityStrategy::chr_kim_halforder, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(biorthogonality_residual(gamma, ProductLattice(Lattice(c), Lattice(b))).max_residual);
  }
}
BENCHMARK(BM_DualWindowResiduals)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cegabor

BENCHMARK_MAIN();
