#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bhom {

/// Failure classification used across the toolkit. The CLI maps these to
/// process exit codes (input/validation problems vs. solver breakdowns).
enum class Errc {
  parse_error,            // expression or config text is malformed
  unknown_symbol,         // symbol not in the allowed set for this context
  zero_literal_divisor,   // division by a statically-zero literal
  eval_error,             // non-finite value produced during evaluation
  ellipticity_violation,  // sampled conductivity tensor not uniformly elliptic
  positivity_violation,   // sampled reaction coefficient not >= eta > 0
  compat_violation,       // interface resistivity mean violates solvability
  geometry_error,         // incompatible mesh resolution / geometry parameters
  size_cap_exceeded,      // requested micro mesh above the configured cap
  constraint_conflict,    // contradictory constraint sets
  solver_failure,         // linear solve did not reach tolerance
  indefinite_form,        // quadratic form detected indefinite (coercivity loss)
  config_error,           // run configuration invalid
  io_error,               // file could not be read or written
  internal_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  static constexpr std::size_t no_offset = static_cast<std::size_t>(-1);

  Error(Errc code, const std::string& message, std::size_t byte_offset = no_offset)
      : std::runtime_error(message), code(code), byte_offset(byte_offset) {}

  Errc code;
  std::size_t byte_offset;  // position in the offending text, when known
};

}  // namespace bhom
