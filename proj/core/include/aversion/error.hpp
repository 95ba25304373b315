#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aversion {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input value violates a documented precondition or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Curve fitting could not satisfy the anchors or a crossing constraint.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Not enough data to determine a curve.
class ArityError : public FitError {
 public:
  using FitError::FitError;
};

/// A motion pattern of the wrong category was passed to a generator.
class CategoryError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Trace timestamps are not strictly increasing.
class OrderingError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A serial line or control message does not follow the wire protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// A config file or flag combination cannot be turned into a scenario.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace aversion
