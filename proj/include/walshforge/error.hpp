#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace walshforge {

enum class ErrorCode {
  UnsupportedDegree,
  ReducibleModulus,
  NonPrimitiveModulus,
  DivisionByZero,
  FieldMismatch,
  NonDivisorSubfield,
  OddDegree,
  EvenDegree,
  ZeroInput,
  OmegaInSubfield,
  NotCoprime,
  ElementOutOfRange,
  DegreeTooLarge,
  GcdConditionViolated,
  InvalidSpec,
  NotTwoToOne,
  Eps1Zero,
  ZeroPoint,
  PatternMismatch,
  OddAmbientDegree,
  NotQuadratic,
  ZeroB,
  GcdViolation,
  HypothesisViolated,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace walshforge
