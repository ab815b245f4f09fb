#pragma once

#include <stdexcept>
#include <string>

namespace rbig {

/// Argument outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input data that violates a contract: non-finite values, wrong shape.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A univariate sample with zero range; no monotone map or density exists.
class DegenerateMarginalError : public DataError {
 public:
  explicit DegenerateMarginalError(const std::string& what, long column = -1)
      : DataError(what), column_(column) {}
  long column() const noexcept { return column_; }

 private:
  long column_;
};

/// RBIG fitting failure (wraps degenerate columns at layer 0).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear algebra failure: singular or indefinite matrices.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Synthetic generator could not produce a valid parameter set.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries a 1-based row and column when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long row = 0, long column = 0)
      : std::runtime_error(what), row_(row), column_(column) {}
  long row() const noexcept { return row_; }
  long column() const noexcept { return column_; }

 private:
  long row_;
  long column_;
};

/// Bad combination of user-supplied options.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rbig
