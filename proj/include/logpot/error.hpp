#pragma once

#include <stdexcept>
#include <string>

namespace logpot {

enum class ErrorCode {
  EmptySet,
  MalformedInterval,
  BadScale,
  BadRatio,
  BadDensity,
  SolveFailed,
  NotNested,
  ExchangeStall,
  RankDeficient,
  InconsistentSetClaim,
  NotApplicable,
  BadSupport,
  NumericalFailure,
  BadLaw,
  Unsupported,
  BadInput,
};

// Machine-parsable identifier, e.g. "E_SOLVE_FAILED".
const char* error_code_name(ErrorCode code);

// Validation errors map to CLI exit 2, solver failures to exit 3.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace logpot
