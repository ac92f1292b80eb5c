#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "cegabor/cohn_elkies.hpp"
#include "cegabor/lattice.hpp"
#include "cegabor/multiplicity.hpp"

namespace cegabor {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Parses JSON text; syntax errors carry line and column.
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);

// Stable formatting: floats with 17 significant digits, non-finite values as null.
std::string dump_json(const Json& value);
std::string format_double(double value);

// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& field);
Matrix matrix_from_json(const Json& j, const std::string& field);

Json lattice_to_json(const Lattice& lattice);
Lattice lattice_from_json(const Json& j, const std::string& field = "lattice");

Json periodic_set_to_json(const PeriodicSet& set);
PeriodicSet periodic_set_from_json(const Json& j, const std::string& field = "set");
bool looks_like_periodic_set(const Json& j);

Json multiplicity_to_json(const MultiplicityMap& mu);
MultiplicityMap multiplicity_from_json(const Json& j, const std::string& field = "multiplicities");

Json ce_function_to_json(const CEFunction& ce);
Json ce_report_to_json(const CEReport& report);

}  // namespace cegabor
