#pragma once

#include <stdexcept>
#include <string>

namespace carleman {

enum class ErrorCode {
  InvalidArgument,
  NonPositive,
  NotOrdered,
  NotIncreasing,
  NotConcave,
  NotLhd,
  NotLogConvex,
  NotCoprime,
  GridTooCoarse,
  GridExhausted,
  MaximizerAtBoundary,
  TruncationSaturated,
  ViolationFound,
  FctmodViolation,
  DerivativeCapExceeded,
  FactorNonpositive,
  AuditFailed,
  SupportTouchesEdge,
  HypothesisFailed,
  TailNotSummable,
  CertificateMissing,
  InconsistentPowers,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace carleman
