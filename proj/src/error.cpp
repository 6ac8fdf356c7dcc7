#include "rtgq/error.hpp"

#include <cstdio>

namespace rtgq {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::UnknownField: return "unknown-field";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Unstable: return "unstable";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::Budget: return "budget";
    case ErrorCode::Config: return "config";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

namespace {
std::string unstable_message(double rho) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "system is unstable: rho = %.17g (need rho < 1)", rho);
  return buf;
}
}  // namespace

UnstableError::UnstableError(double rho)
    : Error(ErrorCode::Unstable, unstable_message(rho)), rho_(rho) {}

}  // namespace rtgq
