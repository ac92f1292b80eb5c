#pragma once

#include <stdexcept>
#include <string>

namespace cegabor {

enum class ErrorCode {
  invalid_lattice,
  dimension,
  budget,
  degenerate_set,
  invalid_argument,
  norm_condition,
  parameter_range,
  asymmetric_multiplicity,
  asymmetric_translations,
  frame_condition,
  invalid_ce,
  quadrature_budget,
  unsupported,
  parse,
  internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cegabor
