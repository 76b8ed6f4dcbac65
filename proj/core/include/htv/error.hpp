#pragma once

#include <stdexcept>
#include <string>

namespace htv {

enum class ErrorKind {
  invalid_input,
  invalid_order,
  dimension_mismatch,
  undefined_witness,
  empty_field,
  grid_mismatch,
  degenerate_simplex,
  invalid_mesh,
  out_of_domain,
  continuity_violation,
  unsorted_breakpoints,
  degenerate_base,
  non_additive,
  stencil_out_of_domain,
  singular_point,
  non_finite,
  parse,
  unsupported,
  collinear_points,
};

// Short kebab-case name, e.g. "invalid-mesh".
const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace htv
