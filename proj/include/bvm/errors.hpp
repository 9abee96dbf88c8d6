#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bvm {

enum class ErrorKind {
  ModelMismatch,
  InvalidVariableTable,
  OddVariablePresent,
  NotZeroDimensional,
  NonHomogeneousIdeal,
  DeltaSNonzero,
  MasterEquationFails,
  NonIsolatedSingularity,
  UnitInIdeal,
  InvalidModel,
  NotClosed,
  UnboundedSlice,
  QuantumExtensionFails,
  OddCouplingUnsupported,
  InternalIdentityViolation,
  HbarDivisionFails,
  OracleMismatch,
  NotNilpotent,
  ParseError,
  Usage,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry a 1-based position in the source text.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorKind::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line), column_(column), message_(message) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

}  // namespace bvm
