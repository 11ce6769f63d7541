#include "chebeatty/error.hpp"

namespace chebeatty {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::RangeTooLarge: return "RangeTooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::MemoryBudget: return "MemoryBudget";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::InvalidSurd: return "InvalidSurd";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AlphaNotGreaterThanOne: return "AlphaNotGreaterThanOne";
    case ErrorCode::InvalidDelta: return "InvalidDelta";
    case ErrorCode::RamifiedPrime: return "RamifiedPrime";
    case ErrorCode::PatternNotClassified: return "PatternNotClassified";
    case ErrorCode::InvalidContext: return "InvalidContext";
    case ErrorCode::ExponentBudget: return "ExponentBudget";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::InsufficientPrimes: return "InsufficientPrimes";
  }
  return "Unknown";
}

bool is_budget_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::RangeTooLarge:
    case ErrorCode::BudgetExceeded:
    case ErrorCode::MemoryBudget:
    case ErrorCode::PrecisionExhausted:
    case ErrorCode::ExponentBudget:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace chebeatty
