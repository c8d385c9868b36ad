#pragma once

#include <stdexcept>
#include <string>

namespace idec {

enum class ErrorKind {
  invalid_input,
  numeric_failure,
  degenerate_input,
  model_mismatch,
  invariant_violation,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for the library. The kind selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ErrorKind::invalid_input, what) {}
};

/// Quadrature did not converge within its evaluation budget.
class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double achieved_error)
      : Error(ErrorKind::numeric_failure, what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what)
      : Error(ErrorKind::degenerate_input, what) {}
};

/// A closed-form model and its numeric oracle disagree.
class ModelMismatch : public Error {
 public:
  ModelMismatch(const std::string& what, double model_value, double oracle_value)
      : Error(ErrorKind::model_mismatch, what),
        model_value_(model_value),
        oracle_value_(oracle_value) {}
  double model_value() const noexcept { return model_value_; }
  double oracle_value() const noexcept { return oracle_value_; }

 private:
  double model_value_;
  double oracle_value_;
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what)
      : Error(ErrorKind::invariant_violation, what) {}
};

}  // namespace idec
