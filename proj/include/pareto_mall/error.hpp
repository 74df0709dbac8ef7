#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pareto_mall {

enum class ErrorKind {
  InvalidValue,
  InvalidArgument,
  SpecMismatch,
  UnknownCategory,
  Schema,
  FacilityLength,
  Validation,
  EmptyDataset,
  ProviderUnavailable,
  Identifier,
  EmptySpec,
  MissingDistance,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` identifies the contract
/// that was violated; `what()` carries the human readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pareto_mall
