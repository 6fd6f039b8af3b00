#pragma once

#include <stdexcept>
#include <string>

namespace hardymod {

/// Failure categories surfaced by the library. Reports and the CLI map them
/// onto status strings and exit codes.
enum class ErrorKind {
  DimensionMismatch,
  InvalidArgument,
  PreconditionFailed,
  NumericalFailure,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by the config/file readers; carries the offending line (0 when the
/// problem is not tied to one line) and field.
class ParseError : public Error {
 public:
  ParseError(int line, std::string field, const std::string& message)
      : Error(ErrorKind::Parse, format(line, field, message)),
        line_(line),
        field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(int line, const std::string& field,
                            const std::string& message) {
    std::string out = line > 0 ? "line " + std::to_string(line) : "";
    if (!field.empty()) out += (out.empty() ? "" : ", ") + std::string("field '") + field + "'";
    return out.empty() ? message : out + ": " + message;
  }

  int line_;
  std::string field_;
};

}  // namespace hardymod
