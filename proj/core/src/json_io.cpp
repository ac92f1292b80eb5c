#include "cegabor/json_io.hpp"

#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "cegabor/error.hpp"

namespace cegabor {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::parse, "field '" + field + "': " + what);
}

double number_at(const Json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

void dump_into(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::null: out += "null"; break;
    case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case Json::value_t::number_integer: out += std::to_string(j.get<long long>()); break;
    case Json::value_t::number_unsigned: out += std::to_string(j.get<unsigned long long>()); break;
    case Json::value_t::number_float: out += format_double(j.get<double>()); break;
    case Json::value_t::string: out += j.dump(); break;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      bool scalars = true;
      for (const auto& e : j) scalars = scalars && !e.is_structured();
      if (scalars) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump_into(j[i], out, indent);
        }
        out += "]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad;
        dump_into(j[i], out, indent + 2);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += close + "]";
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {
        out += pad + Json(key).dump() + ": ";
        dump_into(value, out, indent + 2);
        out += ++i < j.size() ? ",\n" : "\n";
      }
      out += close + "}";
      break;
    }
    default: out += "null"; break;
  }
}

Json tolerance_entry(bool pass, double value, double tolerance) {
  Json j;
  j["pass"] = pass;
  j["value"] = value;
  j["tolerance"] = tolerance;
  return j;
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::parse, fmt::format("{}:{}:{}: malformed JSON ({})", source, line, column, e.what()));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  return fmt::format("{:.17g}", value);
}

std::string dump_json(const Json& value) {
  std::string out;
  dump_into(value, out, 0);
  out += "\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::internal, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw Error(ErrorCode::internal, "write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

Json vector_to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Vector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(field, "expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_at(j[i], field);
  return v;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(field, "expected an array of columns");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto col = vector_from_json(j[static_cast<std::size_t>(c)], field + "[" + std::to_string(c) + "]");
    if (col.size() != n) field_error(field, "columns must have length " + std::to_string(n));
    m.col(c) = col;
  }
  return m;
}

Json lattice_to_json(const Lattice& lattice) {
  Json j;
  j["dim"] = lattice.dim();
  Json basis = Json::array();
  for (Eigen::Index c = 0; c < lattice.basis().cols(); ++c) basis.push_back(vector_to_json(lattice.basis().col(c)));
  j["basis"] = basis;
  if (!lattice.label().empty()) j["label"] = lattice.label();
  return j;
}

Lattice lattice_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) field_error(field, "expected an object with 'dim' and 'basis'");
  for (const auto& [key, value] : j.items()) {
    if (key != "dim" && key != "basis" && key != "label" && key != "schema_version") {
      field_error(field + "." + key, "unknown key");
    }
  }
  if (!j.contains("basis")) field_error(field + ".basis", "missing");
  Matrix basis = matrix_from_json(j["basis"], field + ".basis");
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() != basis.cols()) {
      field_error(field + ".dim", "does not match the basis size");
    }
  }
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) field_error(field + ".label", "expected a string");
    label = j["label"].get<std::string>();
  }
  return Lattice(std::move(basis), std::move(label));
}

Json periodic_set_to_json(const PeriodicSet& set) {
  Json j;
  j["lattice"] = lattice_to_json(set.lattice());
  Json t = Json::array();
  for (const auto& a : set.translations()) t.push_back(vector_to_json(a));
  j["translations"] = t;
  return j;
}

bool looks_like_periodic_set(const Json& j) { return j.is_object() && j.contains("translations"); }

PeriodicSet periodic_set_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) field_error(field, "expected an object with 'lattice' and 'translations'");
  for (const auto& [key, value] : j.items()) {
    if (key != "lattice" && key != "translations" && key != "schema_version") {
      field_error(field + "." + key, "unknown key");
    }
  }
  if (!j.contains("lattice")) field_error(field + ".lattice", "missing");
  if (!j.contains("translations") || !j["translations"].is_array() || j["translations"].empty()) {
    field_error(field + ".translations", "expected a non-empty array of vectors");
  }
  Lattice l = lattice_from_json(j["lattice"], field + ".lattice");
  std::vector<Vector> t;
  for (std::size_t i = 0; i < j["translations"].size(); ++i) {
    t.push_back(vector_from_json(j["translations"][i], field + ".translations[" + std::to_string(i) + "]"));
  }
  return PeriodicSet(std::move(l), std::move(t));
}

Json multiplicity_to_json(const MultiplicityMap& mu) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["omega"] = mu.omega();
  j["dim"] = mu.dim();
  j["strategy"] = to_string(mu.strategy());
  Json entries = Json::array();
  for (const auto& [k, m] : mu.entries()) entries.push_back(Json::array({Json(k), m}));
  j["entries"] = entries;
  if (!mu.raw_counts().empty()) {
    Json raw = Json::array();
    for (const auto& [k, m] : mu.raw_counts()) raw.push_back(Json::array({Json(k), m}));
    j["raw_fiber_counts"] = raw;
  }
  return j;
}

MultiplicityMap multiplicity_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) field_error(field, "expected an object");
  for (const char* key : {"omega", "dim", "strategy", "entries"}) {
    if (!j.contains(key)) field_error(field + "." + key, "missing");
  }
  if (!j["omega"].is_number_integer()) field_error(field + ".omega", "expected an integer");
  if (!j["dim"].is_number_integer()) field_error(field + ".dim", "expected an integer");
  if (!j["strategy"].is_string()) field_error(field + ".strategy", "expected a string");
  const int dim = j["dim"].get<int>();
  std::map<IndexVector, int> entries;
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_array() || !e[1].is_number_integer()) {
      field_error(field + ".entries", "expected [[k...], mu] pairs");
    }
    IndexVector k;
    for (const auto& c : e[0]) {
      if (!c.is_number_integer()) field_error(field + ".entries", "indices must be integers");
      k.push_back(c.get<int>());
    }
    entries[k] = e[1].get<int>();
  }
  MultiplicityStrategy strategy;
  try {
    strategy = parse_strategy(j["strategy"].get<std::string>());
  } catch (const Error& e) {
    field_error(field + ".strategy", e.what());
  }
  return MultiplicityMap(dim, j["omega"].get<int>(), strategy, std::move(entries));
}

Json ce_function_to_json(const CEFunction& ce) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "ce_function";
  j["dim"] = ce.dim();
  j["lattice"] = lattice_to_json(ce.lattice());
  j["dual_lattice"] = lattice_to_json(ce.dual_lattice());
  Json k = Json::array();
  for (Eigen::Index c = 0; c < ce.k_basis().cols(); ++c) k.push_back(vector_to_json(ce.k_basis().col(c)));
  j["k_basis"] = k;
  j["alpha"] = ce.alpha();
  j["sigma"] = ce.sigma();
  j["convention"] = to_string(ce.convention());
  j["beta_cutoff"] = ce.beta_cutoff();
  j["cutoff_constant"] = ce.cutoff_constant();
  j["det_factor"] = ce.det_factor();
  j["lattice_size"] = ce.separation();
  j["size"] = ce.size();
  j["multiplicities"] = multiplicity_to_json(ce.multiplicities());
  j["warnings"] = ce.warnings();
  return j;
}

Json ce_report_to_json(const CEReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "ce_report";
  j["periodic"] = r.periodic;
  j["size"] = r.bound.size;
  j["bound"] = r.bound.bound;
  j["center_density"] = r.bound.center_density;
  j["ratio"] = r.bound.ratio;
  j["sign_ok"] = r.sign_ok;
  Json sign;
  sign["symbolic"] = r.sign.symbolic;
  sign["grid"] = tolerance_entry(r.sign.grid_pass, r.sign.grid_max, r.sign.tolerance);
  sign["grid_points"] = r.sign.grid_points;
  j["sign"] = sign;
  Json analytic;
  analytic["pass"] = r.ft.analytic.pass;
  analytic["margin"] = r.ft.analytic.margin;
  analytic["tolerance"] = 0.0;
  j["ft_ok_analytic"] = analytic;
  j["ft_ok_grid"] = r.ft.grid_pass;
  Json ftgrid = tolerance_entry(r.ft.grid_pass, r.ft.grid_min, r.ft.tolerance);
  ftgrid["grid_points"] = r.ft.grid_points;
  ftgrid["max_radius"] = r.ft.max_radius;
  j["ft_grid"] = ftgrid;
  j["ft_zero"] = r.bound.ft0;
  j["ft_zero_positive"] = r.ft_zero_positive;
  j["f_zero"] = r.bound.f0;
  j["special_residual"] = r.special.ratio_residual;
  Json special;
  special["ratio_residual"] = r.special.ratio_residual;
  special["expanded_lhs"] = r.special.expanded_lhs;
  special["expanded_rhs"] = r.special.expanded_rhs;
  special["expanded_residual"] = r.special.expanded_residual;
  special["zero_sets_agree"] = r.special.zero_sets_agree;
  special["tolerance"] = r.special.tolerance;
  j["special"] = special;
  j["poisson_residual"] = r.poisson.residual;
  Json poisson;
  poisson["lattice_sum"] = r.poisson.lattice_sum;
  poisson["dual_sum"] = r.poisson.dual_sum;
  poisson["radius"] = r.poisson.radius;
  j["poisson"] = poisson;
  Json range;
  range["simple_pass"] = r.range.simple_pass;
  range["simple_margin"] = r.range.simple_margin;
  range["q"] = r.range.q;
  range["log_pass"] = r.range.log_pass;
  range["log_margin"] = r.range.log_margin;
  j["parameter_range"] = range;
  Json params;
  params["dim"] = r.dim;
  params["alpha"] = r.alpha;
  params["sigma"] = r.sigma;
  params["omega"] = r.omega;
  params["strategy"] = to_string(r.strategy);
  params["beta_cutoff"] = r.beta_cutoff;
  params["cutoff_constant"] = r.cutoff_constant;
  params["det_factor"] = r.det_factor;
  params["lattice_size"] = r.separation;
  j["params"] = params;
  j["convention"] = to_string(r.convention);
  j["warnings"] = r.warnings;
  if (r.periodic) {
    j["N"] = r.translations;
    j["ell_sigma"] = r.separation;
    j["imag_residual"] = tolerance_entry(r.imag_residual <= r.tolerances.imag, r.imag_residual, r.tolerances.imag);
    Json windows = Json::array();
    for (const auto& w : r.windows) {
      Json e;
      e["translation"] = vector_to_json(w.translation);
      e["weight"] = w.weight;
      e["max_imag"] = w.max_imag;
      windows.push_back(e);
    }
    j["windows"] = windows;
  }
  return j;
}

}  // namespace cegabor
