#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tra {

/// Error categories surfaced by the core; the C API maps these 1:1 onto
/// `tra_status` values.
enum class ErrorCode {
  InvalidArgument = 1,
  OutOfRange,
  DimensionMismatch,
  CarrierMismatch,
  NotAPermutation,
  NotPermutable,
  NotSubCarrier,
  BudgetExceeded,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error in a term, equation or algebra spec. Line and column are
/// 1-based; offset is 0-based into the input text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::size_t line,
             std::size_t column)
      : Error(ErrorCode::Parse, format(message, line, column)),
        message_(message),
        offset_(offset),
        line_(line),
        column_(column) {}

  const std::string& message() const noexcept { return message_; }
  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " +
           message;
  }

  std::string message_;
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace tra
