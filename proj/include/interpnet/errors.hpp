#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace interpnet {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with the data handed to a model: malformed files, invalid
/// samples, inconsistent dimensions. Mapped to CLI exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Failures while building a model from valid data. Mapped to exit code 3.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DuplicateInput : public DataError {
 public:
  using DataError::DataError;
};

class IllDefined : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : DataError(what + " (row " + std::to_string(row) + ", column " +
                  std::to_string(column) + ")"),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class NonNumericCell : public ParseError {
 public:
  using ParseError::ParseError;
};

class RaggedRows : public ParseError {
 public:
  using ParseError::ParseError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class VersionMismatch : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

class DegenerateGap : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class InvalidTolerance : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnresolvableCollision : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

/// Construction ran past its step budget, most likely cycling between
/// collisions. `layer` is the (0-based) layer under construction when the
/// budget ran out.
class BudgetExceeded : public ConstructionError {
 public:
  BudgetExceeded(const std::string& what, std::size_t layer)
      : ConstructionError(what), layer_(layer) {}

  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

}  // namespace interpnet
