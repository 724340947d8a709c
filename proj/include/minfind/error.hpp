#pragma once

#include <stdexcept>
#include <string>

namespace minfind {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported theory text. Carries the 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Ill-sorted terms, bad profiles, signature mismatches.
class LogicError : public Error {
 public:
  using Error::Error;
};

/// Process failures and error replies from the external solver.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A scraped model or a solver answer that contradicts itself.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace minfind
