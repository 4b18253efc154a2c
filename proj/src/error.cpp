#include "spectra/error.hpp"

namespace spectra {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::syntax_error: return "syntax_error";
    case ErrorCode::unknown_function: return "unknown_function";
    case ErrorCode::unbalanced_parentheses: return "unbalanced_parentheses";
    case ErrorCode::unbound_parameter: return "unbound_parameter";
    case ErrorCode::evaluation_singularity: return "evaluation_singularity";
    case ErrorCode::invalid_extent: return "invalid_extent";
    case ErrorCode::grid_mismatch: return "grid_mismatch";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::zero_function: return "zero_function";
    case ErrorCode::non_convergence: return "non_convergence";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::no_closed_form: return "no_closed_form";
    case ErrorCode::unknown_catalog_id: return "unknown_catalog_id";
    case ErrorCode::invalid_parameter: return "invalid_parameter";
    case ErrorCode::schema_violation: return "schema_violation";
    case ErrorCode::io_failure: return "io_failure";
  }
  return "unknown";
}

}  // namespace spectra
