#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsqmc {

enum class ErrorKind {
  RadicandMismatch,
  DivisionByZero,
  Overflow,
  ParseError,
  InvalidParams,
  UnsupportedParams,
  InvalidDigits,
  ResourceLimit,
  InvalidAnchor,
  NotInInterval,
  HypothesisViolated,
  FieldMismatch,
  NoRelationFound,
  IndexOutOfRange,
  EmptyInput,
  OutOfRange,
  UnknownFunction,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace lsqmc
