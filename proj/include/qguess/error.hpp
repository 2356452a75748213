#ifndef QGUESS_ERROR_HPP
#define QGUESS_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qguess {

enum class ErrorCode {
  NonPositiveWeight,
  EmptyAlphabet,
  DuplicateLabel,
  UnknownLabel,
  NonPositiveOrder,
  DegenerateParameters,
  AlphabetMismatch,
  ZeroQ,
  NonPositiveQ,
  NonPositiveRho,
  NonConvergence,
  BudgetExceeded,
  DimensionTooLarge,
  InvalidConfig,
  InvalidStrategy,
  ParseError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::EmptyAlphabet: return "EmptyAlphabet";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NonPositiveOrder: return "NonPositiveOrder";
    case ErrorCode::DegenerateParameters: return "DegenerateParameters";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::ZeroQ: return "ZeroQ";
    case ErrorCode::NonPositiveQ: return "NonPositiveQ";
    case ErrorCode::NonPositiveRho: return "NonPositiveRho";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidStrategy: return "InvalidStrategy";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Domain error carrying a machine-readable code. what() starts with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail = {}) { throw Error(code, detail); }

}  // namespace qguess

#endif  // QGUESS_ERROR_HPP
