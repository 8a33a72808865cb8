#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace provchain {

enum class ErrorCode {
  GasCapExceeded,
  EmptyBatch,
  NotFound,
  InsufficientProviders,
  UnknownCid,
  UnknownProduct,
  DomainError,
  NegativeDelay,
  MissingInput,
  InvalidConfig,
  SuiteFailure,
};

std::string_view to_string(ErrorCode code);

// Thrown for caller-side contract violations. On-chain failures are never
// thrown; they surface as Reverted receipts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace provchain
