#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrsplit {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A factorization hit a zero/negative pivot at `index()`.
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, std::size_t index);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class NotPositiveDefinite : public FactorizationError {
 public:
  using FactorizationError::FactorizationError;
};

/// NaN/Inf, loss of definiteness or other breakdown inside an iteration.
class NumericalBreakdown : public Error {
 public:
  using Error::Error;
};

class SizeCapExceeded : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace lrsplit
