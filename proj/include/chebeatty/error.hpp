#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chebeatty {

enum class ErrorCode {
  InvalidArgument,
  InvalidRange,
  RangeTooLarge,
  BudgetExceeded,
  MemoryBudget,
  PrecisionExhausted,
  InvalidSurd,
  ParseError,
  AlphaNotGreaterThanOne,
  InvalidDelta,
  RamifiedPrime,
  PatternNotClassified,
  InvalidContext,
  ExponentBudget,
  SingularGram,
  ConvergenceFailure,
  InsufficientPrimes,
};

std::string_view to_string(ErrorCode code);

// True for failures caused by a resource cap (time, memory, precision) rather
// than by malformed input. The CLI maps these to exit status 3.
bool is_budget_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace chebeatty
