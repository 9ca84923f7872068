#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace windward {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite or otherwise out-of-domain value passed to an operation.
class InvalidInputError : public Error {
public:
  using Error::Error;
};

/// A required CSV column is absent or the header is malformed.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// A data row could not be parsed; carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Input contained a header but no data rows.
class EmptyInputError : public Error {
public:
  using Error::Error;
};

/// Record file version or checksum mismatch, or structural corruption.
class FormatError : public Error {
public:
  using Error::Error;
};

/// The telemetry and wind series cannot be placed on a common time grid.
class AlignmentError : public Error {
public:
  using Error::Error;
};

/// Bad scenario/CLI configuration. Maps to exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Iterative solver failed to converge; message carries the last iterate.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Statistic undefined for the given data (zero variance, zero SS_tot).
class UndefinedStatError : public Error {
public:
  using Error::Error;
};

/// Planner could not complete: live-wind stream truncated or arrival
/// not reached within the step budget.
class PlanError : public Error {
public:
  using Error::Error;
};

/// Filesystem failure while reading or writing artifacts.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace windward
