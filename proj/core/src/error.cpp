#include "cegabor/error.hpp"

namespace cegabor {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_lattice: return "invalid-lattice";
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::budget: return "budget";
    case ErrorCode::degenerate_set: return "degenerate-set";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::norm_condition: return "norm-condition";
    case ErrorCode::parameter_range: return "parameter-range";
    case ErrorCode::asymmetric_multiplicity: return "asymmetric-multiplicity";
    case ErrorCode::asymmetric_translations: return "asymmetric-translations";
    case ErrorCode::frame_condition: return "frame-condition";
    case ErrorCode::invalid_ce: return "invalid-ce";
    case ErrorCode::quadrature_budget: return "quadrature-budget";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::parse: return "parse";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace cegabor
