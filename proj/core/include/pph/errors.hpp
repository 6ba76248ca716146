#pragma once

#include <stdexcept>
#include <string>

namespace pph {

enum class ErrorCode {
  RingMismatch,
  NegativeDiscriminant,
  DegreeOverflow,
  DivisionByZero,
  IdentityHasAllPoints,
  NotDistinct,
  Discontinuous,
  NotInjective,
  BadWitness,
  UnorderedBreakpoints,
  NotFixed,
  PreconditionViolated,
  InvalidArcs,
  ArcsNotDisjoint,
  BudgetExceeded,
  IdentityHasNoSign,
  NotInH,
  NotSupported,
  IndexOutOfRange,
  ParseError,
  ValidationError,
  InternalError,
};

const char* error_code_name(ErrorCode c);

/// Domain error carrying one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace pph
