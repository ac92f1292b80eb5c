#include "cli.hpp"

#include <fmt/format.h>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "cegabor/cohn_elkies.hpp"
#include "cegabor/error.hpp"
#include "cegabor/gaussian.hpp"
#include "cegabor/json_io.hpp"
#include "cegabor/lattice.hpp"
#include "cegabor/multiplicity.hpp"
#include "cegabor/periodic.hpp"
#include "cegabor/wexler_raz.hpp"

namespace cegabor::cli {
namespace {

namespace fs = std::filesystem;

constexpr long long kMaxSweepPoints = 100'000;

struct Flags {
  std::string config;
  std::string out_dir;
  std::vector<std::string> tol;
  std::string convention;
  std::string strategy;
  std::optional<long long> seed;
};

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::parse, "config key '" + key + "': " + what);
}

class Config {
 public:
  Config() = default;
  Config(Json values, fs::path base) : values_(std::move(values)), base_(std::move(base)) {
    if (!values_.is_object()) throw Error(ErrorCode::parse, "config must be a JSON object");
  }

  void allow(std::initializer_list<const char*> keys) { allowed_.insert(keys.begin(), keys.end()); }

  void reject_unknown() const {
    for (const auto& [key, value] : values_.items()) {
      if (!allowed_.count(key)) config_error(key, "unknown key");
    }
  }

  bool has(const std::string& key) const { return values_.contains(key) && !values_[key].is_null(); }

  const Json& at(const std::string& key) const {
    if (!has(key)) config_error(key, "missing");
    return values_[key];
  }

  double number(const std::string& key) const {
    const Json& j = at(key);
    if (!j.is_number()) config_error(key, "expected a number");
    return j.get<double>();
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) const {
    const Json& j = at(key);
    if (!j.is_number_integer()) config_error(key, "expected an integer");
    return j.get<long long>();
  }

  long long integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::string string_or(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Json& j = at(key);
    if (!j.is_string()) config_error(key, "expected a string");
    return j.get<std::string>();
  }

  bool flag_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& j = at(key);
    if (!j.is_boolean()) config_error(key, "expected true or false");
    return j.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) const {
    const Json& j = at(key);
    if (!j.is_array() || j.empty()) config_error(key, "expected a non-empty array of numbers");
    std::vector<double> v;
    for (const auto& x : j) {
      if (!x.is_number()) config_error(key, "expected a non-empty array of numbers");
      v.push_back(x.get<double>());
    }
    return v;
  }

  // Inline object, or a path to a JSON file relative to the config file.
  Json document(const std::string& key) const {
    const Json& j = at(key);
    if (j.is_string()) return read_json_file(resolve(j.get<std::string>()));
    return j;
  }

  std::string resolve(const std::string& path) const {
    const fs::path p(path);
    if (p.is_absolute() || base_.empty()) return p.string();
    return (base_ / p).string();
  }

 private:
  Json values_ = Json::object();
  fs::path base_;
  std::set<std::string> allowed_;
};

Config load_config(const Flags& flags) {
  if (flags.config.empty()) return Config(Json::object(), {});
  Json j = read_json_file(flags.config);
  return Config(std::move(j), fs::path(flags.config).parent_path());
}

struct Settings {
  GridOptions grid;
  Tolerances tol;
  CutoffConvention convention = CutoffConvention::consistent;
  MultiplicityStrategy strategy = MultiplicityStrategy::quadrant_symmetric;
  bool strategy_given = false;
};

void allow_common(Config& config) {
  config.allow({"schema_version", "seed", "convention", "strategy", "tolerances", "grid_angular",
                "grid_radial_per_size", "grid_random_directions", "sign_extent"});
}

void set_tolerance(Tolerances& tol, const std::string& key, double value) {
  if (!(value > 0) || !std::isfinite(value)) config_error("tolerances." + key, "must be positive");
  if (key == "sign_grid") {
    tol.sign_grid = value;
  } else if (key == "ft_grid") {
    tol.ft_grid = value;
  } else if (key == "special") {
    tol.special = value;
  } else if (key == "imag") {
    tol.imag = value;
  } else {
    config_error("tolerances." + key, "unknown tolerance");
  }
}

CutoffConvention convention_from(const std::string& name) {
  try {
    return parse_convention(name);
  } catch (const Error& e) {
    throw Error(ErrorCode::parse, e.what());
  }
}

MultiplicityStrategy strategy_from(const std::string& name) {
  try {
    return parse_strategy(name);
  } catch (const Error& e) {
    throw Error(ErrorCode::parse, e.what());
  }
}

Settings load_settings(const Config& config, const Flags& flags) {
  Settings s;
  long long seed = config.integer_or("seed", 0);
  if (flags.seed) seed = *flags.seed;
  if (seed < 0) config_error("seed", "must be nonnegative");
  s.grid.seed = static_cast<std::uint64_t>(seed);

  const auto positive_int = [&](const char* key, int fallback) {
    const long long v = config.integer_or(key, fallback);
    if (v <= 0 || v > 1'000'000) config_error(key, "must be a positive integer");
    return static_cast<int>(v);
  };
  s.grid.angular = positive_int("grid_angular", s.grid.angular);
  s.grid.radial_per_size = positive_int("grid_radial_per_size", s.grid.radial_per_size);
  s.grid.random_directions = positive_int("grid_random_directions", s.grid.random_directions);
  s.grid.sign_extent = config.number_or("sign_extent", s.grid.sign_extent);
  if (!(s.grid.sign_extent > 1)) config_error("sign_extent", "must exceed 1");

  if (config.has("tolerances")) {
    const Json& t = config.at("tolerances");
    if (!t.is_object()) config_error("tolerances", "expected an object");
    for (const auto& [key, value] : t.items()) {
      if (!value.is_number()) config_error("tolerances." + key, "expected a number");
      set_tolerance(s.tol, key, value.get<double>());
    }
  }
  for (const auto& item : flags.tol) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::parse, "--tol expects key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    double value = 0;
    std::size_t used = 0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw Error(ErrorCode::parse, "--tol " + key + ": not a number");
    set_tolerance(s.tol, key, value);
  }

  s.convention = convention_from(flags.convention.empty() ? config.string_or("convention", "consistent")
                                                          : flags.convention);
  const std::string strategy = flags.strategy.empty() ? config.string_or("strategy", "") : flags.strategy;
  if (!strategy.empty()) {
    s.strategy = strategy_from(strategy);
    s.strategy_given = true;
  }
  return s;
}

class Output {
 public:
  Output(const Flags& flags, std::ostream& out, std::ostream& err) : dir_(flags.out_dir), out_(out), err_(err) {}

  bool to_files() const { return !dir_.empty(); }

  void emit(const std::string& name, const std::string& content) {
    if (to_files()) {
      const std::string path = (fs::path(dir_) / name).string();
      write_file_atomic(path, content);
      out_ << "wrote " << path << "\n";
    } else {
      out_ << content;
    }
  }

  // Side outputs such as plot data are only produced with an output directory.
  void emit_file_only(const std::string& name, const std::string& content) {
    if (to_files()) {
      emit(name, content);
    } else {
      err_ << "note: " << name << " is only written with --out\n";
    }
  }

  void note(const std::string& line) { (to_files() ? out_ : err_) << line << "\n"; }

 private:
  std::string dir_;
  std::ostream& out_;
  std::ostream& err_;
};

Lattice config_lattice(const Config& config, const std::string& key) {
  return lattice_from_json(config.document(key), key);
}

double positive(const Config& config, const std::string& key, std::optional<double> fallback = {}) {
  const double v = (fallback && !config.has(key)) ? *fallback : config.number(key);
  if (!(v > 0) || !std::isfinite(v)) config_error(key, "must be positive and finite");
  return v;
}

int omega_from(const Config& config, int fallback) {
  const long long v = config.integer_or("omega", fallback);
  if (v < 1 || v > 1000) config_error("omega", "must be an integer in [1, 1000]");
  return static_cast<int>(v);
}

void require_symmetric_strategy(const Settings& s) {
  if (s.strategy_given && s.strategy != MultiplicityStrategy::quadrant_symmetric) {
    throw Error(ErrorCode::asymmetric_multiplicity,
                std::string("Cohn-Elkies construction needs symmetric multiplicities; strategy '") +
                    to_string(s.strategy) + "' is not symmetric");
  }
}

// ---------------------------------------------------------------- lattice info

Json criticality_json(const CriticalityReport& c) {
  Json j;
  j["supported"] = c.supported;
  j["critical"] = c.critical;
  j["shortest_length_sq"] = c.shortest_length_sq;
  j["hermite_target"] = c.hermite_target;
  j["relative_gap"] = c.relative_gap;
  j["hermite_constant"] = c.hermite_constant ? Json(*c.hermite_constant) : Json(nullptr);
  return j;
}

Json lattice_info_json(const Lattice& l) {
  Json j;
  j["lattice"] = lattice_to_json(l);
  j["dim"] = l.dim();
  j["covolume"] = l.covolume();
  j["dual"] = lattice_to_json(dual(l));
  j["adjoint"] = l.dim() % 2 == 0 ? lattice_to_json(adjoint(l)) : Json(nullptr);
  const ShortestVector sv = shortest_vector(l);
  Json s;
  s["vector"] = vector_to_json(sv.vector);
  s["coefficients"] = vector_to_json(sv.coefficients);
  s["length"] = sv.length;
  j["shortest_vector"] = s;
  j["center_density"] = center_density(l);
  j["criticality"] = criticality_json(criticality_check(l));
  if (l.dim() % 2 == 0) {
    const LabelDensity d = label_density(l);
    j["label_density"] = Json{{"closed_form", d.closed_form}, {"classical_redundancy", d.classical_redundancy}};
  } else {
    j["label_density"] = nullptr;
  }
  return j;
}

int cmd_lattice_info(const Flags& flags, const std::string& positional, Output& output) {
  Config config = load_config(flags);
  allow_common(config);
  config.allow({"input"});
  config.reject_unknown();
  load_settings(config, flags);

  std::string path = positional;
  if (path.empty()) {
    if (!config.has("input")) throw Error(ErrorCode::parse, "lattice info needs a path or config key 'input'");
    path = config.resolve(config.string_or("input", ""));
  }
  const Json doc = read_json_file(path);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["kind"] = "lattice_info";
  if (looks_like_periodic_set(doc)) {
    const PeriodicSet set = periodic_set_from_json(doc, "set");
    Json info = lattice_info_json(set.lattice());
    for (auto& [key, value] : info.items()) report[key] = value;
    Json p;
    p["set"] = periodic_set_to_json(set);
    p["translations"] = set.size();
    p["min_distance"] = min_distance_periodic(set);
    p["center_density"] = center_density(set);
    p["dual_set"] = periodic_set_to_json(sigma_dual(set));
    report["periodic"] = p;
  } else {
    Json info = lattice_info_json(lattice_from_json(doc, "lattice"));
    for (auto& [key, value] : info.items()) report[key] = value;
    report["periodic"] = nullptr;
  }
  output.emit("lattice_info.json", dump_json(report));
  return ok;
}

// ------------------------------------------------------------------ dual build

WindowKind window_kind(const std::string& name) {
  if (name == "gaussian") return WindowKind::gaussian;
  if (name == "truncated_gaussian") return WindowKind::truncated_gaussian;
  if (name == "hat") return WindowKind::hat;
  config_error("window", "expected gaussian, truncated_gaussian or hat");
}

std::optional<Vector> diagonal_spacing(const Matrix& c) {
  const Matrix off = c - Matrix(c.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > 0) return std::nullopt;
  return c.diagonal().cwiseAbs();
}

int cmd_dual_build(const Flags& flags, Output& output) {
  Config config = load_config(flags);
  allow_common(config);
  config.allow({"L", "K", "alpha", "epsilon", "omega", "window", "wr_grid", "pou_points"});
  config.reject_unknown();
  const Settings s = load_settings(config, flags);

  const Lattice l = config_lattice(config, "L");
  const Lattice k = config_lattice(config, "K");
  if (l.dim() != k.dim()) throw Error(ErrorCode::dimension, "L and K must have the same dimension");
  const int n = l.dim();
  const std::string window_name = config.string_or("window", "truncated_gaussian");
  const WindowKind kind = window_kind(window_name);
  const double alpha = kind == WindowKind::hat ? 0.0 : positive(config, "alpha", std::numbers::pi);

  std::optional<double> epsilon;
  if (config.has("epsilon")) {
    epsilon = config.number("epsilon");
    if (!(*epsilon > 0 && *epsilon < 1)) config_error("epsilon", "must lie in (0, 1)");
  }
  int omega = 0;
  if (config.has("omega")) {
    omega = omega_from(config, 1);
  } else if (epsilon && kind != WindowKind::hat) {
    omega = omega_for_epsilon(alpha, *epsilon, n);
  } else {
    throw Error(ErrorCode::parse, "dual build needs 'omega' or, for Gaussian windows, 'epsilon'");
  }
  output.note(fmt::format("omega = {}", omega));

  const Matrix& c = l.basis();
  const Matrix& b = k.basis();
  const NormCondition norm = chrkim_norm_condition(c, b, omega);
  const Window base = kind == WindowKind::hat                  ? Window::hat(c)
                      : kind == WindowKind::truncated_gaussian ? Window::truncated_gaussian(alpha, c, omega)
                                                               : Window::gaussian(alpha, c);
  DualWindow gamma = build_dual_window(base, c, b, omega, s.strategy);
  if (epsilon) gamma.set_epsilon(*epsilon);

  const long long wr_grid = config.integer_or("wr_grid", n == 1 ? 64 : 24);
  if (wr_grid < 2 || wr_grid > 4096) config_error("wr_grid", "must be an integer in [2, 4096]");
  const WrIdentityReport wr = wr_identity_residual(base, gamma, c, b, static_cast<int>(wr_grid));

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["kind"] = "dual_report";
  report["dim"] = n;
  report["window"] = window_name;
  report["alpha"] = kind == WindowKind::hat ? Json(nullptr) : Json(alpha);
  report["epsilon"] = epsilon ? Json(*epsilon) : Json(nullptr);
  report["omega"] = omega;
  report["strategy"] = to_string(s.strategy);
  report["norm_condition"] =
      Json{{"pass", norm.pass}, {"norm", norm.norm}, {"bound", norm.bound}, {"margin", norm.margin}};
  report["det_factor"] = gamma.det_factor();
  report["multiplicity_total"] = gamma.multiplicities().total();
  report["multiplicity_symmetric"] = gamma.multiplicities().is_symmetric();
  const double budget = epsilon ? gamma.error_budget() : 0.0;
  const auto within_budget = [&](double residual) { return epsilon ? Json(residual <= budget) : Json(nullptr); };
  report["error_budget"] = epsilon ? Json(budget) : Json(nullptr);

  if (kind != WindowKind::hat) {
    if (const auto spacing = diagonal_spacing(c)) {
      const long long points = config.integer_or("pou_points", 200);
      if (points < 2 || points > 1'000'000) config_error("pou_points", "must be an integer in [2, 1000000]");
      const PartitionOfUnityReport pou = partition_of_unity_residual(alpha, *spacing, static_cast<int>(points));
      report["partition_of_unity"] = Json{{"max_residual", pou.max_residual},
                                          {"bound", pou.bound},
                                          {"max_law_deviation", pou.max_law_deviation},
                                          {"max_series_deviation", pou.max_series_deviation},
                                          {"grid_points", pou.grid_points}};
    } else {
      report["partition_of_unity"] = nullptr;
    }
  } else {
    report["partition_of_unity"] = nullptr;
  }

  Json wr_json{{"max_residual", wr.max_residual},
               {"worst_shift", vector_to_json(wr.worst_shift)},
               {"grid_points", wr.grid_points},
               {"shifts", wr.shifts}};
  wr_json["within_budget"] = within_budget(wr.max_residual);
  report["wr_identity"] = wr_json;

  if (kind != WindowKind::hat) {
    const BiorthogonalityReport bi = biorthogonality_residual(gamma, ProductLattice(l, k));
    Json bi_json{{"max_residual", bi.max_residual},
                 {"diagonal_error", bi.diagonal_error},
                 {"max_offdiagonal", bi.max_offdiagonal},
                 {"worst", vector_to_json(bi.worst)},
                 {"points", bi.points},
                 {"radius", bi.radius}};
    bi_json["within_budget"] = within_budget(bi.max_residual);
    report["biorthogonality"] = bi_json;
  } else {
    report["biorthogonality"] = nullptr;
  }

  if (output.to_files()) {
    output.emit("multiplicity.json", dump_json(multiplicity_to_json(gamma.multiplicities())));
    output.emit("dual_report.json", dump_json(report));
  } else {
    Json combined;
    combined["multiplicity"] = multiplicity_to_json(gamma.multiplicities());
    combined["report"] = report;
    output.emit("", dump_json(combined));
  }
  return ok;
}

// ------------------------------------------------------------------ ce / periodic

struct PlotSpec {
  bool enabled = false;
  Vector direction;
  double radius = 0;
  int points = 0;
};

void allow_plot(Config& config) { config.allow({"plot", "plot_direction", "plot_radius", "plot_points"}); }

PlotSpec plot_spec(const Config& config, int dim, double size) {
  PlotSpec p;
  p.enabled = config.flag_or("plot", false);
  if (!p.enabled) return p;
  if (config.has("plot_direction")) {
    p.direction = vector_from_json(config.at("plot_direction"), "plot_direction");
    if (p.direction.size() != dim) config_error("plot_direction", "dimension mismatch");
    if (!(p.direction.norm() > 0)) config_error("plot_direction", "must be nonzero");
    p.direction.normalize();
  } else {
    p.direction = Vector::Unit(dim, 0);
  }
  p.radius = positive(config, "plot_radius", 2 * size);
  const long long points = config.integer_or("plot_points", 201);
  if (points < 2 || points > 1'000'000) config_error("plot_points", "must be an integer in [2, 1000000]");
  p.points = static_cast<int>(points);
  return p;
}

template <class F, class G>
std::string plot_csv(const PlotSpec& p, F&& f, G&& ft) {
  std::string csv = "r,f,ft\n";
  for (int i = 0; i < p.points; ++i) {
    const double r = p.radius * i / (p.points - 1);
    const Vector x = r * p.direction;
    csv += format_double(r) + "," + format_double(f(x)) + "," + format_double(ft(x)) + "\n";
  }
  return csv;
}

struct CeInputs {
  Lattice l;
  Lattice k;
  double alpha;
  double sigma;
  int omega;
};

CeInputs ce_inputs(const Config& config) {
  Lattice l = config_lattice(config, "L");
  Lattice k = config.has("K") ? config_lattice(config, "K") : Lattice::integer(l.dim());
  if (l.dim() != k.dim()) throw Error(ErrorCode::dimension, "L and K must have the same dimension");
  return {std::move(l), std::move(k), positive(config, "alpha"), positive(config, "sigma"), omega_from(config, 1)};
}

Json bound_json(const BoundReport& b) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "ce_bound";
  j["size"] = b.size;
  j["bound"] = b.bound;
  j["center_density"] = b.center_density;
  j["ratio"] = b.ratio;
  j["f_zero"] = b.f0;
  j["ft_zero"] = b.ft0;
  return j;
}

int cmd_ce(const Flags& flags, const std::string& action, Output& output) {
  Config config = load_config(flags);
  allow_common(config);
  config.allow({"L", "K", "alpha", "sigma", "omega"});
  allow_plot(config);
  config.reject_unknown();
  const Settings s = load_settings(config, flags);
  require_symmetric_strategy(s);

  const CeInputs in = ce_inputs(config);
  const CEFunction ce = build_ce(in.l, in.k, in.alpha, in.sigma, in.omega, s.convention);

  if (action == "build") {
    output.emit("ce_function.json", dump_json(ce_function_to_json(ce)));
  } else if (action == "bound") {
    output.emit("ce_bound.json", dump_json(bound_json(ce_bound(ce))));
  } else {
    const CEReport report = verify_ce(ce, s.grid, s.tol);
    output.emit("ce_report.json", dump_json(ce_report_to_json(report)));
  }
  const PlotSpec plot = plot_spec(config, ce.dim(), ce.size());
  if (plot.enabled) {
    output.emit_file_only("ce_plot.csv", plot_csv(
                                             plot, [&](const Vector& x) { return ce.f(x); },
                                             [&](const Vector& x) { return ce.ft(x); }));
  }
  return ok;
}

int cmd_periodic_ce(const Flags& flags, Output& output) {
  Config config = load_config(flags);
  allow_common(config);
  config.allow({"set", "K", "alpha", "sigma", "omega"});
  allow_plot(config);
  config.reject_unknown();
  const Settings s = load_settings(config, flags);
  require_symmetric_strategy(s);

  const PeriodicSet set = periodic_set_from_json(config.document("set"), "set");
  const Lattice k = config.has("K") ? config_lattice(config, "K") : Lattice::integer(set.dim());
  if (k.dim() != set.dim()) throw Error(ErrorCode::dimension, "set and K must have the same dimension");
  const PeriodicCEFunction pce = build_ce_periodic(set, k, positive(config, "alpha"), positive(config, "sigma"),
                                                   omega_from(config, 1), s.convention);
  const CEReport report = verify_ce_periodic(pce, s.grid, s.tol);
  output.emit("ce_report.json", dump_json(ce_report_to_json(report)));
  const PlotSpec plot = plot_spec(config, pce.dim(), pce.size());
  if (plot.enabled) {
    output.emit_file_only("ce_plot.csv", plot_csv(
                                             plot, [&](const Vector& x) { return pce.f(x); },
                                             [&](const Vector& x) { return pce.ft(x); }));
  }
  return ok;
}

// ------------------------------------------------------------------ sweep

std::vector<double> axis_values(const Config& config, const std::string& name) {
  const std::string values_key = name + "_values";
  const std::string range_key = name + "_range";
  if (config.has(values_key) && config.has(range_key)) {
    config_error(values_key, "give either " + values_key + " or " + range_key);
  }
  if (config.has(values_key)) return config.numbers(values_key);
  if (config.has(range_key)) {
    const Json& r = config.at(range_key);
    if (!r.is_object()) config_error(range_key, "expected {from, to, count}");
    for (const auto& [key, value] : r.items()) {
      if (key != "from" && key != "to" && key != "count") config_error(range_key + "." + key, "unknown key");
    }
    if (!r.contains("from") || !r["from"].is_number() || !r.contains("to") || !r["to"].is_number() ||
        !r.contains("count") || !r["count"].is_number_integer()) {
      config_error(range_key, "expected numeric 'from', 'to' and integer 'count'");
    }
    const double from = r["from"].get<double>();
    const double to = r["to"].get<double>();
    const long long count = r["count"].get<long long>();
    if (count < 1) config_error(range_key + ".count", "must be positive");
    if (count > kMaxSweepPoints) {
      throw Error(ErrorCode::budget, fmt::format("sweep grid has more than {} points", kMaxSweepPoints));
    }
    std::vector<double> v;
    for (long long i = 0; i < count; ++i) {
      v.push_back(count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return v;
  }
  if (config.has(name)) return {config.number(name)};
  config_error(values_key, "missing (or " + range_key + ", or " + name + ")");
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

std::string ce_sweep_row(std::size_t index, double alpha, double sigma, const CEReport& r) {
  const std::vector<std::string> cells = {
      std::to_string(index),
      format_double(alpha),
      format_double(sigma),
      "ok",
      format_double(r.bound.size),
      format_double(r.bound.bound),
      format_double(r.bound.center_density),
      format_double(r.bound.ratio),
      csv_bool(r.sign_ok),
      csv_bool(r.sign.symbolic),
      format_double(r.sign.grid_max),
      csv_bool(r.ft.analytic.pass),
      format_double(r.ft.analytic.margin),
      format_double(r.ft.grid_min),
      format_double(r.bound.ft0),
      format_double(r.bound.f0),
      format_double(r.special.ratio_residual),
      format_double(r.special.expanded_residual),
      csv_bool(r.special.zero_sets_agree),
      format_double(r.poisson.residual),
      format_double(r.range.simple_margin),
      format_double(r.range.log_margin),
      format_double(r.cutoff_constant),
  };
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) row += (i ? "," : "") + cells[i];
  return row + "\n";
}

constexpr const char* kCeSweepHeader =
    "index,alpha,sigma,status,size,bound,center_density,ratio,sign_ok,sign_symbolic,sign_grid_max,"
    "ft_analytic,ft_margin,ft_grid_min,ft_zero,f_zero,special_residual,expanded_residual,zero_sets_agree,"
    "poisson_residual,range_simple_margin,range_log_margin,cutoff_constant\n";
constexpr int kCeSweepColumns = 23;

std::string ce_sweep_error_row(std::size_t index, double alpha, double sigma, const Error& e) {
  std::string row = std::to_string(index) + "," + format_double(alpha) + "," + format_double(sigma) + "," +
                    to_string(e.code());
  for (int i = 4; i < kCeSweepColumns; ++i) row += ",";
  return row + "\n";
}

std::vector<Lattice> grassmann_family(const Config& config) {
  std::vector<Lattice> family;
  if (config.has("family") && config.has("t_values")) config_error("family", "give either family or t_values");
  if (config.has("family")) {
    const Json& f = config.at("family");
    if (!f.is_array() || f.empty()) config_error("family", "expected a non-empty array of lattices");
    for (std::size_t i = 0; i < f.size(); ++i) {
      const std::string field = "family[" + std::to_string(i) + "]";
      const Json doc = f[i].is_string() ? read_json_file(config.resolve(f[i].get<std::string>())) : f[i];
      family.push_back(lattice_from_json(doc, field));
    }
  } else {
    for (double t : config.numbers("t_values")) {
      if (!(t > 0)) config_error("t_values", "entries must be positive");
      Matrix basis = Matrix::Zero(2, 2);
      basis(0, 0) = t;
      basis(1, 1) = 1 / t;
      family.emplace_back(basis, "diag(" + format_double(t) + ", " + format_double(1 / t) + ")");
    }
  }
  if (static_cast<long long>(family.size()) > kMaxSweepPoints) {
    throw Error(ErrorCode::budget, fmt::format("sweep grid has more than {} points", kMaxSweepPoints));
  }
  return family;
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

int cmd_sweep(const Flags& flags, Output& output) {
  Config config = load_config(flags);
  allow_common(config);
  config.allow({"mode", "L", "K", "alpha", "sigma", "omega", "alpha_values", "alpha_range", "sigma_values",
                "sigma_range", "family", "t_values"});
  config.reject_unknown();
  const Settings s = load_settings(config, flags);
  const std::string mode = config.string_or("mode", "ce");

  std::string csv;
  if (mode == "grassmann") {
    const double alpha = positive(config, "alpha", std::numbers::pi);
    const std::vector<Lattice> family = grassmann_family(config);
    const GrassmannianReport scan = grassmannian_scan(alpha, family);
    csv = "index,label,correlation,scaled_shortest_length,argmin,argmax\n";
    for (std::size_t i = 0; i < family.size(); ++i) {
      csv += fmt::format("{},{},{},{},{},{}\n", i, csv_text(family[i].label()), format_double(scan.correlations[i]),
                         format_double(scan.scaled_shortest_lengths[i]), csv_bool(i == scan.argmin_correlation),
                         csv_bool(i == scan.argmax_length));
    }
  } else if (mode == "ce") {
    require_symmetric_strategy(s);
    const Lattice l = config_lattice(config, "L");
    const Lattice k = config.has("K") ? config_lattice(config, "K") : Lattice::integer(l.dim());
    if (l.dim() != k.dim()) throw Error(ErrorCode::dimension, "L and K must have the same dimension");
    const int omega = omega_from(config, 1);
    const std::vector<double> alphas = axis_values(config, "alpha");
    const std::vector<double> sigmas = axis_values(config, "sigma");
    if (static_cast<long long>(alphas.size()) * static_cast<long long>(sigmas.size()) > kMaxSweepPoints) {
      throw Error(ErrorCode::budget, fmt::format("sweep grid has more than {} points", kMaxSweepPoints));
    }
    csv = kCeSweepHeader;
    std::size_t index = 0;
    for (double alpha : alphas) {
      for (double sigma : sigmas) {
        try {
          if (!(alpha > 0) || !(sigma > 0)) throw Error(ErrorCode::invalid_argument, "alpha and sigma must be positive");
          const CEFunction ce = build_ce(l, k, alpha, sigma, omega, s.convention);
          csv += ce_sweep_row(index, alpha, sigma, verify_ce(ce, s.grid, s.tol));
        } catch (const Error& e) {
          if (e.code() == ErrorCode::internal) throw;
          csv += ce_sweep_error_row(index, alpha, sigma, e);
        }
        ++index;
      }
    }
  } else {
    config_error("mode", "expected ce or grassmann");
  }
  output.emit("sweep.csv", csv);
  return ok;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse:
      return parse_error;
    case ErrorCode::internal:
    case ErrorCode::quadrature_budget:
      return internal;
    default:
      return precondition;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohn-Elkies bound functions from Gabor dual windows", "cegabor"};
  app.fallthrough();
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--config", flags.config, "JSON config file");
  app.add_option("--out", flags.out_dir, "output directory");
  app.add_option("--tol", flags.tol, "tolerance override key=value (sign_grid, ft_grid, special, imag)")
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--convention", flags.convention, "cutoff convention: consistent or literal");
  app.add_option("--strategy", flags.strategy, "multiplicity strategy: quadrant_symmetric or chr_kim");
  app.add_option("--seed", flags.seed, "seed for randomized grid directions");

  auto* lattice = app.add_subcommand("lattice", "lattice utilities")->require_subcommand(1);
  std::string lattice_path;
  auto* lattice_info = lattice->add_subcommand("info", "report on a lattice or periodic set JSON file");
  lattice_info->add_option("path", lattice_path, "lattice or periodic set JSON");

  auto* dual_cmd = app.add_subcommand("dual", "approximate dual windows")->require_subcommand(1);
  auto* dual_build = dual_cmd->add_subcommand("build", "build a dual window and report its residuals");

  auto* ce = app.add_subcommand("ce", "Cohn-Elkies functions")->require_subcommand(1);
  auto* ce_build = ce->add_subcommand("build", "build and serialize the function");
  auto* ce_verify = ce->add_subcommand("verify", "run the verification battery");
  auto* ce_bound_cmd = ce->add_subcommand("bound", "compute the packing bound");

  auto* periodic = app.add_subcommand("periodic", "periodic sets")->require_subcommand(1);
  auto* periodic_ce = periodic->add_subcommand("ce", "build and verify a periodic-set function");

  auto* sweep = app.add_subcommand("sweep", "parameter sweeps to CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return parse_error;
  }

  Output output(flags, out, err);
  try {
    if (*lattice_info) return cmd_lattice_info(flags, lattice_path, output);
    if (*dual_build) return cmd_dual_build(flags, output);
    if (*ce_build) return cmd_ce(flags, "build", output);
    if (*ce_verify) return cmd_ce(flags, "verify", output);
    if (*ce_bound_cmd) return cmd_ce(flags, "bound", output);
    if (*periodic_ce) return cmd_periodic_ce(flags, output);
    if (*sweep) return cmd_sweep(flags, output);
    err << "error: no command\n";
    return parse_error;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "error [parse]: " << e.what() << "\n";
    return parse_error;
  } catch (const fs::filesystem_error& e) {
    err << "error [io]: " << e.what() << "\n";
    return internal;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return internal;
  }
}

}  // namespace cegabor::cli
