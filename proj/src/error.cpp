#include "logpot/error.hpp"

namespace logpot {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySet: return "E_EMPTY_SET";
    case ErrorCode::MalformedInterval: return "E_MALFORMED_INTERVAL";
    case ErrorCode::BadScale: return "E_BAD_SCALE";
    case ErrorCode::BadRatio: return "E_BAD_RATIO";
    case ErrorCode::BadDensity: return "E_BAD_DENSITY";
    case ErrorCode::SolveFailed: return "E_SOLVE_FAILED";
    case ErrorCode::NotNested: return "E_NOT_NESTED";
    case ErrorCode::ExchangeStall: return "E_EXCHANGE_STALL";
    case ErrorCode::RankDeficient: return "E_RANK_DEFICIENT";
    case ErrorCode::InconsistentSetClaim: return "E_INCONSISTENT_SET";
    case ErrorCode::NotApplicable: return "E_NOT_APPLICABLE";
    case ErrorCode::BadSupport: return "E_BAD_SUPPORT";
    case ErrorCode::NumericalFailure: return "E_NUMERICAL_FAILURE";
    case ErrorCode::BadLaw: return "E_BAD_LAW";
    case ErrorCode::Unsupported: return "E_UNSUPPORTED";
    case ErrorCode::BadInput: return "E_BAD_INPUT";
  }
  return "E_UNKNOWN";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SolveFailed:
    case ErrorCode::ExchangeStall:
    case ErrorCode::NumericalFailure:
    case ErrorCode::InconsistentSetClaim:
      return false;
    default:
      return true;
  }
}

}  // namespace logpot
