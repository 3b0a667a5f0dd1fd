#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace impartial {

enum class ErrorKind {
  InvalidArgument,
  NotPositiveDefinite,
  NoConvergence,
  BadHeader,
  NonNumericCell,
  MissingValue,
  RaggedRow,
  TooFewRows,
  TooFewColumns,
  NonFinite,
  ZeroVariance,
  TooFewObservations,
  DegenerateNullSpace,
  SignUndefined,
  AmbiguousDirection,
  ZeroCoefficient,
  NumericalInconsistency,
  ExactFit,
  OutOfRange,
  AllReplicatesFailed,
  InvalidLevel,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `index` carries the pivot, row or
/// variable index the error refers to; `column` the column name when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> index = std::nullopt,
        std::string column = {})
      : std::runtime_error(message),
        kind_(kind),
        index_(index),
        column_(std::move(column)) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> index() const noexcept { return index_; }
  const std::string& column() const noexcept { return column_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
  std::string column_;
};

}  // namespace impartial
