#pragma once

#include <stdexcept>
#include <string>

namespace imdet {

/// Raised when an argument violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when ROC construction is impossible because one class is empty.
class DegenerateLabels : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Raised when an input document does not match its schema. The message names
/// the offending field or column.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace imdet
