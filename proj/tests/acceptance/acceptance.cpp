#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <fmt/core.h>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include "cegabor/cohn_elkies.hpp"
#include "cegabor/error.hpp"
#include "cegabor/gaussian.hpp"
#include "cegabor/json_io.hpp"
#include "cegabor/periodic.hpp"
#include "cegabor/quadrature.hpp"
#include "cegabor/wexler_raz.hpp"
#include "cli.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace cegabor {
namespace {

namespace fs = std::filesystem;
using testing::Gen;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) { return fmt::format("{:.3g}", v); }

// 1: closed forms against adaptive quadrature, n = 1, 2.
Outcome closed_forms_vs_quadrature() {
  const auto start = Clock::now();
  Outcome out;
  Gen gen(1);
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.max_depth = 20;
  double worst_gip = 0, worst_conv = 0, worst_ft = 0;
  int samples = 0;
  for (int t = 0; t < 24; ++t) {
    const int n = 1 + t % 2;
    const double alpha = gen.uniform(0.5, 2.0);
    const TimeFrequencyPoint z{gen.vector(n, -1, 1), gen.vector(n, -0.5, 0.5)};
    const auto integrand = [&](const Vector& x) {
      return cd(std::exp(-alpha * x.squaredNorm() - alpha * (x - z.u).squaredNorm())) *
             std::polar(1.0, 2 * pi * x.dot(z.v));
    };
    const cd q = integrate_box(integrand, gaussian_box(0.5 * z.u, 2 * alpha, 1e-22), opt).value;
    const cd closed = gabor_inner_product(alpha, z);
    worst_gip = std::max(worst_gip, std::abs(q - closed) / std::abs(closed));

    const double beta = gen.uniform(0.5, 4.0);
    const Vector shift = gen.vector(n, -1, 1), x = gen.vector(n, -1, 1);
    const auto conv = [&](const Vector& y) {
      const double psi = std::pow(pi / beta, n / 2.0) * std::exp(-pi * pi * (x - y).squaredNorm() / beta);
      return cd(std::exp(-alpha * (y - shift).squaredNorm()) * psi);
    };
    const double qc = integrate_box(conv, gaussian_box(shift, alpha, 1e-22), opt).value.real();
    const double cc = gaussian_convolution(alpha, beta, shift, x);
    worst_conv = std::max(worst_conv, std::abs(qc - cc) / std::abs(cc));
    ++samples;
  }
  for (int n : {1, 2}) {
    const CEFunction ce = build_ce(Lattice::integer(n), Lattice::integer(n).scaled(0.5), 1.0, 1.0, 1);
    const auto f = [&](const Vector& x) { return cd(eval_f(ce, x)); };
    const Box box = gaussian_box(Vector::Zero(n), pi * pi / ce.alpha(), 1e-22);
    for (int t = 0; t < 20; ++t) {
      const Vector xi = gen.vector(n, -1.5, 1.5);
      const double q = fourier_quadrature(f, xi, box, opt).real();
      const double closed = eval_ft(ce, xi);
      worst_ft = std::max(worst_ft, std::abs(q - closed) / std::abs(closed));
    }
  }
  const double elapsed = seconds_since(start);
  out.require(worst_gip <= 1e-7, fmt::format("gabor inner product max rel err {} over {} points", sci(worst_gip), samples));
  out.require(worst_conv <= 1e-7, fmt::format("convolution max rel err {} over {} points", sci(worst_conv), samples));
  out.require(worst_ft <= 1e-7, fmt::format("transform max rel err {} over 40 points", sci(worst_ft)));
  out.require(elapsed < 60, fmt::format("runtime {:.2f}s < 60s", elapsed));
  return out;
}

Vector integer_point(Gen& gen, int n, int bound) {
  Vector c(n);
  for (int i = 0; i < n; ++i) c(i) = gen.integer(-bound, bound);
  return c;
}

// 2: adjoint commutation phase and split-lattice adjoint.
Outcome adjoint_correctness() {
  Outcome out;
  Gen gen(2);
  double worst = 0;
  for (int t = 0; t < 3; ++t) {
    const Lattice l = gen.lattice(4);
    const Lattice adj = adjoint(l);
    std::vector<Vector> points, adj_points;
    for (int s = 0; s < 50; ++s) {
      points.push_back(l.point(integer_point(gen, 4, 3)));
      adj_points.push_back(adj.point(integer_point(gen, 4, 3)));
    }
    for (const auto& a : points) {
      for (const auto& b : adj_points) {
        const double phase = a.head(2).dot(b.tail(2)) - a.tail(2).dot(b.head(2));
        worst = std::max(worst, std::abs(std::polar(1.0, 2 * pi * phase) - 1.0));
      }
    }
  }
  out.require(worst <= 1e-9, fmt::format("max phase deviation {} over 3x2500 pairs", sci(worst)));
  bool split_ok = true;
  for (int t = 0; t < 3; ++t) {
    const Lattice k = gen.lattice(2), l = gen.lattice(2);
    split_ok = split_ok && unimodular_equivalent(adjoint(ProductLattice(k, l).combined()), direct_sum(dual(l), dual(k)));
  }
  out.require(split_ok, "split adjoint equals swapped duals");
  return out;
}

// 3: exact identity for the hat fixture.
Outcome exact_wr_identity() {
  Outcome out;
  for (int n = 1; n <= 2; ++n) {
    for (int omega = 1; omega <= 2; ++omega) {
      const Matrix c = Matrix::Identity(n, n), b = 0.2 * Matrix::Identity(n, n);
      const DualWindow gamma = build_dual_window(Window::hat(c), c, b, omega, MultiplicityStrategy::chr_kim_halforder);
      const double r = wr_identity_residual(gamma.base(), gamma, c, b, n == 1 ? 64 : 24).max_residual;
      out.require(r <= 1e-12, fmt::format("n={} omega={} residual {}", n, omega, sci(r)));
    }
  }
  return out;
}

// 4: approximate duality of the truncated Gaussian, sized from epsilon.
Outcome approximate_duality() {
  Outcome out;
  const double alpha = 0.1;
  double previous_wr = 1e300, previous_bi = 1e300;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    const int omega = omega_for_epsilon(alpha, eps, 1);
    const Matrix c = 2.0 * Matrix::Identity(1, 1);
    const Matrix b = Matrix::Constant(1, 1, 1.0 / (2 * (2 * omega - 1)));
    DualWindow gamma = build_dual_window(alpha, c, b, omega, MultiplicityStrategy::chr_kim_halforder, true);
    gamma.set_epsilon(eps);
    const double budget = gamma.error_budget();
    const double wr = wr_identity_residual(gamma.base(), gamma, c, b, 64).max_residual;
    const double bi = biorthogonality_residual(gamma, ProductLattice(Lattice(c), Lattice(b))).max_residual;
    if (eps == 1e-3) {
      out.require(wr <= budget && bi <= budget, fmt::format("eps={} omega={} identity {} biorthogonality {} budget {}",
                                                            sci(eps), omega, sci(wr), sci(bi), sci(budget)));
    } else {
      out.require(wr < previous_wr && bi < previous_bi,
                  fmt::format("eps={} omega={} identity {} biorthogonality {}", sci(eps), omega, sci(wr), sci(bi)));
    }
    previous_wr = wr;
    previous_bi = bi;
  }
  return out;
}

// 5: partition-of-unity residual against the first-harmonic error law.
Outcome partition_law() {
  Outcome out;
  const PartitionOfUnityReport r = partition_of_unity_residual(pi, Vector::Ones(1), 1000);
  out.require(r.max_law_deviation <= 1e-10,
              fmt::format("max deviation from first-harmonic law {} (tol 1e-10)", sci(r.max_law_deviation)));
  out.detail += fmt::format("; full Fourier series deviation {}", sci(r.max_series_deviation));
  return out;
}

// radius <= 0 selects the radius from the function's own Gaussian tails.
void battery(Outcome& out, const CEFunction& ce, double sign_lo, double sign_hi, double radius) {
  const CEReport r = verify_ce(ce);
  out.require(r.sign.symbolic, "symbolic sign");
  double max_f = -1e300;
  for (int i = 0; i <= 20000; ++i) {
    Vector x = Vector::Zero(ce.dim());
    x(0) = sign_lo + (sign_hi - sign_lo) * i / 20000.0;
    max_f = std::max(max_f, eval_f(ce, x));
  }
  out.require(max_f <= 1e-12 && r.sign.grid_pass,
              fmt::format("max f on [{:.4g}, {:.4g}] {}; grid max {}", sign_lo, sign_hi, sci(max_f), sci(r.sign.grid_max)));
  out.require(r.ft.analytic.pass && r.ft.analytic.margin > 0, fmt::format("analytic margin {}", sci(r.ft.analytic.margin)));
  out.require(r.ft.grid_min >= -1e-12, fmt::format("grid min transform {}", sci(r.ft.grid_min)));
  out.require(r.bound.ft0 > 0, fmt::format("transform at 0 {}", sci(r.bound.ft0)));
  if (radius <= 0) {
    out.detail += fmt::format("; Poisson residual at R=8 {} (truncated)", sci(poisson_residual(ce, ce.dual_lattice(), 8.0).residual));
    radius = poisson_radius(ce);
  }
  const double poisson = poisson_residual(ce, ce.dual_lattice(), radius).residual;
  out.require(poisson <= 1e-8, fmt::format("Poisson residual at R={:.3g} {}", radius, sci(poisson)));
}

// 6: the full battery on Z.
Outcome ce_integers() {
  const auto start = Clock::now();
  Outcome out;
  const CEFunction ce = build_ce(Lattice::integer(1), Lattice::integer(1), pi / std::numbers::e, 1.0, 1);
  battery(out, ce, 1.0, 11.0, 8.0);
  const BoundReport b = ce_bound(ce);
  out.require(b.bound >= 0.5, fmt::format("bound {:.6f}, ratio to 1/2 {:.6f}", b.bound, b.bound / 0.5));
  const double elapsed = seconds_since(start);
  out.require(elapsed < 30, fmt::format("runtime {:.2f}s < 30s", elapsed));
  return out;
}

// 7: the battery for the hexagonal dual pair.
Outcome ce_hexagonal() {
  const auto start = Clock::now();
  Outcome out;
  const Lattice probe = testing::hexagonal(1.0);
  const Lattice l = dual(probe);
  const Lattice k = Lattice::integer(2).scaled(0.3);
  const double sigma = 1.0;
  const double q = parameter_range(1.0, sigma, probe.covolume(), 2, cutoff_decay(sigma, CutoffConvention::consistent)).q;
  const double alpha = q * pi * (1 - 1e-9);
  const CEFunction ce = build_ce(l, k, alpha, sigma, 1);
  const double size = ce.size();
  battery(out, ce, size, size + 10, 0);
  const BoundReport b = ce_bound(ce);
  out.require(b.bound >= b.center_density,
              fmt::format("alpha {:.6f} bound {:.6f} center density {:.6f} ratio {:.6f}", alpha, b.bound, b.center_density, b.ratio));
  const double elapsed = seconds_since(start);
  out.require(elapsed < 120, fmt::format("runtime {:.2f}s < 120s", elapsed));
  return out;
}

// 8: values at zero and the specialness residuals.
Outcome values_at_zero() {
  Outcome out;
  Gen gen(8);
  int draws = 0;
  double worst = 0;
  for (int attempt = 0; attempt < 1000 && draws < 20; ++attempt) {
    const int n = 1 + attempt % 3;
    const Lattice l = gen.lattice(n);
    const double norm = l.basis().jacobiSvd().singularValues()(0);
    const Lattice k(gen.orthogonal(n) * (gen.uniform(0.3, 0.95) / (std::sqrt(double(n)) * norm)));
    try {
      const CEFunction ce = build_ce(l, k, gen.log_uniform(0.05, 1.5), gen.log_uniform(0.3, 3), 1);
      const ZeroValues v = ce_values_at_zero(ce);
      const Vector zero = Vector::Zero(n);
      worst = std::max(worst, std::abs(v.f0 - eval_f(ce, zero)) / std::max(1.0, std::abs(v.f0)));
      worst = std::max(worst, std::abs(v.ft0 - eval_ft(ce, zero)) / std::max(1.0, std::abs(v.ft0)));
      ++draws;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::parameter_range) throw;
    }
  }
  out.require(draws == 20 && worst <= 1e-10, fmt::format("{} draws, max deviation {}", draws, sci(worst)));

  const Lattice z = Lattice::integer(1);
  const double q = parameter_range(1.0, 1.0, 1.0, 1, cutoff_decay(1.0, CutoffConvention::consistent)).q;
  int disagreements = 0;
  for (int i = 1; i <= 100; ++i) {
    const double alpha = q * pi * i / 100.0 * (1 - 1e-12);
    const SpecialnessReport s = specialness_residual(build_ce(z, z, alpha, 1.0, 1), 1e-9);
    const bool ratio_zero = std::abs(s.ratio_residual) <= 1e-9;
    const bool expanded_zero = std::abs(s.expanded_residual) <= 1e-9;
    const bool same_sign = (s.ratio_residual > 0) == (s.expanded_residual > 0);
    if (ratio_zero != expanded_zero || (!ratio_zero && !same_sign) || !s.zero_sets_agree) ++disagreements;
  }
  out.require(disagreements == 0, fmt::format("zero-set disagreements over 100-point alpha sweep: {}", disagreements));
  return out;
}

// 9: correlation argmin equals shortest-length argmax.
Outcome grassmannian() {
  Outcome out;
  std::vector<Lattice> family;
  for (int i = 0; i < 10; ++i) {
    const double t = 0.5 + 0.1 * i;
    Matrix basis = Matrix::Zero(2, 2);
    basis(0, 0) = t;
    basis(1, 1) = 1 / t;
    family.emplace_back(basis);
  }
  const GrassmannianReport r = grassmannian_scan(pi, family);
  out.require(r.argmin_correlation == r.argmax_length,
              fmt::format("argmin correlation {} argmax length {} (t = {:.1f})", r.argmin_correlation, r.argmax_length,
                          0.5 + 0.1 * r.argmin_correlation));
  return out;
}

// 10: the linear Hermite lower bound against enumerated critical lattices.
Outcome hermite_sanity() {
  Outcome out;
  const char* names[] = {"A1", "A2", "A3", "D4"};
  for (int m = 1; m <= 4; ++m) {
    const Lattice l = testing::root_lattice(names[m - 1]);
    const double len = shortest_vector(l).length;
    const double gamma = len * len / std::pow(l.covolume(), 2.0 / m);
    const double oracle = testing::even_gram_hermite(testing::cartan_matrix(names[m - 1]));
    out.require(hermite_lower_bound(m) <= gamma && std::abs(gamma - oracle) <= 1e-10,
                fmt::format("m={} lower {:.6f} enumerated {:.6f} oracle {:.6f}", m, hermite_lower_bound(m), gamma, oracle));
  }
  return out;
}

int compare_numbers(const Json& a, const Json& b, const std::string& path, double tol, std::string& first) {
  int mismatches = 0;
  if (a.is_object() && b.is_object()) {
    for (const auto& [key, value] : a.items()) {
      if (key == "periodic" || !b.contains(key)) continue;
      mismatches += compare_numbers(value, b[key], path + "." + key, tol, first);
    }
    return mismatches;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) {
      if (first.empty()) first = path;
      return 1;
    }
    for (std::size_t i = 0; i < a.size(); ++i) mismatches += compare_numbers(a[i], b[i], path + "[" + std::to_string(i) + "]", tol, first);
    return mismatches;
  }
  bool same = a == b;
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    same = std::abs(x - y) <= tol * std::max(1.0, std::abs(y));
  }
  if (!same && first.empty()) first = path;
  return same ? 0 : 1;
}

// 11: single-translation reduction and the half-shifted integers.
Outcome periodic_reduction() {
  Outcome out;
  const Lattice z = Lattice::integer(1);
  const PeriodicCEFunction single = build_ce_periodic(PeriodicSet(z, {Vector::Zero(1)}), z.scaled(0.5), 0.5, 1.0, 1);
  const CEFunction ce = build_ce(z, z.scaled(0.5), 0.5, 1.0, 1);
  std::string first;
  const int mismatches = compare_numbers(ce_report_to_json(verify_ce(ce)), ce_report_to_json(verify_ce_periodic(single)),
                                         "report", 1e-10, first);
  out.require(mismatches == 0, fmt::format("single translation field mismatches: {}{}", mismatches,
                                           first.empty() ? "" : " (first " + first + ")"));

  const PeriodicSet half(z, {Vector::Zero(1), Vector::Constant(1, 0.5)});
  const PeriodicCEFunction pce = build_ce_periodic(half, z.scaled(0.25), 0.5, 1.0, 1);
  const CEReport r = verify_ce_periodic(pce);
  out.require(std::abs(r.separation - 0.5) <= 1e-12, fmt::format("dual separation {:.12f}", r.separation));
  out.require(r.imag_residual <= 1e-10, fmt::format("imaginary residual {}", sci(r.imag_residual)));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 12: byte-identical CLI outputs across runs.
Outcome determinism() {
  Outcome out;
  const fs::path root = fs::temp_directory_path() / "cegabor_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream(root / name) << content;
    return (root / name).string();
  };
  const std::string z1 = R"({"basis": [[1]]})";
  const std::string hex = write("hex.json", R"({"basis": [[1.0745699318235422, 0], [0.5372849659117711, 0.9306048591020996]]})");
  struct Command {
    std::string label;
    std::vector<std::string> args;
  };
  const std::vector<Command> commands = {
      {"lattice info", {"lattice", "info", hex}},
      {"dual build", {"dual", "build", "--strategy", "chr_kim", "--config",
                      write("dual.json", R"({"L": {"basis": [[2]]}, "K": {"basis": [[0.029]]}, "alpha": 0.1, "epsilon": 1e-3})")}},
      {"ce build", {"ce", "build", "--config", write("ce.json", R"({"L": )" + z1 + R"(, "alpha": 1, "sigma": 1, "plot": true})")}},
      {"ce verify", {"ce", "verify", "--seed", "7", "--config", (root / "ce.json").string()}},
      {"ce bound", {"ce", "bound", "--config", (root / "ce.json").string()}},
      {"periodic ce", {"periodic", "ce", "--config",
                       write("periodic.json", R"({"set": {"lattice": )" + z1 +
                                                  R"(, "translations": [[0], [0.5]]}, "K": {"basis": [[0.25]]}, "alpha": 0.5, "sigma": 1})")}},
      {"sweep ce", {"sweep", "--config",
                    write("sweep.json", R"({"mode": "ce", "L": )" + z1 +
                                            R"(, "alpha_range": {"from": 0.2, "to": 1.5, "count": 5}, "sigma_values": [0.5, 1, 2]})")}},
      {"sweep grassmann", {"sweep", "--config", write("grass.json", R"({"mode": "grassmann", "t_values": [0.5, 0.75, 1, 1.25, 1.5]})")}},
  };
  for (const auto& command : commands) {
    std::vector<std::string> files[2];
    bool ran = true;
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = root / fmt::format("run{}", run) / command.label;
      auto args = command.args;
      args.push_back("--out");
      args.push_back(dir.string());
      std::ostringstream sink_out, sink_err;
      if (cli::run(args, sink_out, sink_err) != 0) {
        ran = false;
        out.require(false, command.label + " failed: " + sink_err.str());
        break;
      }
      for (const auto& entry : fs::directory_iterator(dir)) files[run].push_back(entry.path().filename().string());
      std::sort(files[run].begin(), files[run].end());
    }
    if (!ran) continue;
    bool identical = files[0] == files[1] && !files[0].empty();
    for (const auto& name : files[0]) {
      identical = identical && slurp(root / "run0" / command.label / name) == slurp(root / "run1" / command.label / name);
    }
    out.require(identical, fmt::format("{} ({} files)", command.label, files[0].size()));
  }
  fs::remove_all(root);
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "closed forms vs quadrature", closed_forms_vs_quadrature},
      {2, "adjoint correctness", adjoint_correctness},
      {3, "exact identity, hat window", exact_wr_identity},
      {4, "approximate duality", approximate_duality},
      {5, "partition-of-unity error law", partition_law},
      {6, "CE validity on Z", ce_integers},
      {7, "CE validity, hexagonal pair", ce_hexagonal},
      {8, "values at zero", values_at_zero},
      {9, "Grassmannian equivalence", grassmannian},
      {10, "Hermite sanity", hermite_sanity},
      {11, "periodic reduction", periodic_reduction},
      {12, "CLI determinism", determinism},
  };
  return all;
}

}  // namespace
}  // namespace cegabor

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-12)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const auto& c : cegabor::criteria()) {
    if (only != 0 && c.id != only) continue;
    cegabor::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    fmt::print("criterion {}: {} {}: {}\n", c.id, outcome.pass ? "PASS" : "FAIL", c.name, outcome.detail);
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
