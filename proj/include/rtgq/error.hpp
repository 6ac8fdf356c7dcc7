#pragma once

#include <stdexcept>
#include <string>

namespace rtgq {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  Validation,
  UnknownField,
  Domain,
  Unsupported,
  Unstable,
  NonConvergence,
  Budget,
  Config,
  InsufficientData,
  Overflow,
  Io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by every stationary operation when rho >= 1.
class UnstableError : public Error {
 public:
  explicit UnstableError(double rho);
  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

}  // namespace rtgq
