#include "bhom/errors.hpp"

namespace bhom {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::parse_error: return "PARSE_ERROR";
    case Errc::unknown_symbol: return "UNKNOWN_SYMBOL";
    case Errc::zero_literal_divisor: return "ZERO_LITERAL_DIVISOR";
    case Errc::eval_error: return "EVAL_ERROR";
    case Errc::ellipticity_violation: return "ELLIPTICITY_VIOLATION";
    case Errc::positivity_violation: return "POSITIVITY_VIOLATION";
    case Errc::compat_violation: return "COMPAT_VIOLATION";
    case Errc::geometry_error: return "GEOMETRY_ERROR";
    case Errc::size_cap_exceeded: return "SIZE_CAP_EXCEEDED";
    case Errc::constraint_conflict: return "CONSTRAINT_CONFLICT";
    case Errc::solver_failure: return "SOLVER_FAILURE";
    case Errc::indefinite_form: return "INDEFINITE_FORM";
    case Errc::config_error: return "CONFIG_ERROR";
    case Errc::io_error: return "IO_ERROR";
    case Errc::internal_error: return "INTERNAL_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace bhom
