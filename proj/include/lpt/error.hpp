#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lpt {

enum class ErrorCode {
  Syntax,
  NongroundBuiltin,
  BuiltinType,
  LimitExceeded,
  BuiltinPosition,
  IndexOutOfRange,
  NoMatch,
  VariableConditionViolated,
  SelfFoldWithoutRecursionGuard,
  PredicateAlreadyDefined,
  UnknownPredicate,
  UnknownClause,
  UnknownLemma,
  SubsumptionCheckFailed,
  NoPartialMatch,
  DuplicateDefinition,
  BranchConflict,
  UnknownEntry,
  FingerprintMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Base for every failure raised by the library. The code is stable and is
/// what the service layer maps onto exit codes and HTTP statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::string expected, const std::string& message)
      : Error(ErrorCode::Syntax, message),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::string expected_;
};

}  // namespace lpt
