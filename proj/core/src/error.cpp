#include "htv/error.hpp"

namespace htv {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_order: return "invalid-order";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::undefined_witness: return "undefined-witness";
    case ErrorKind::empty_field: return "empty-field";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::degenerate_simplex: return "degenerate-simplex";
    case ErrorKind::invalid_mesh: return "invalid-mesh";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::continuity_violation: return "continuity-violation";
    case ErrorKind::unsorted_breakpoints: return "unsorted-breakpoints";
    case ErrorKind::degenerate_base: return "degenerate-base";
    case ErrorKind::non_additive: return "non-additive";
    case ErrorKind::stencil_out_of_domain: return "stencil-out-of-domain";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::non_finite: return "non-finite";
    case ErrorKind::parse: return "parse";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::collinear_points: return "collinear-points";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace htv
