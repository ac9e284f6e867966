#pragma once

#include <stdexcept>
#include <string>

namespace djopt {

enum class ErrorCode {
  DimensionMismatch,
  PointNotInSet,
  EmptySet,
  ScaleCapExceeded,
  SyntaxError,
  DomainError,
  MissingKappa,
  AssumptionViolated,
  InfiniteArithmetic,
  InvalidArgument,
  SchemaError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Parse errors carry a 1-based line/column.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string expected,
              const std::string& what)
      : Error(ErrorCode::SyntaxError, what),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::DimensionMismatch, what);
}

}  // namespace djopt
