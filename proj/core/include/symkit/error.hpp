#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace symkit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Errors caused by bad input (the CLI maps these to exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A checked invariant failed (the CLI maps these to exit code 3).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public InputError {
 public:
  DivisionByZero() : InputError("division by zero") {}
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class VariableMismatch : public InputError {
 public:
  using InputError::InputError;
};

class UnknownVariable : public InputError {
 public:
  explicit UnknownVariable(const std::string& name)
      : InputError("unknown variable '" + name + "'") {}
};

class OrderOverflow : public InputError {
 public:
  using InputError::InputError;
};

class NotSolvedForm : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateEquation : public InputError {
 public:
  using InputError::InputError;
};

class NonSquare : public InputError {
 public:
  NonSquare() : InputError("matrix is not square") {}
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class NotCommuting : public InputError {
 public:
  NotCommuting(std::size_t first, std::size_t second)
      : InputError("matrices " + std::to_string(first) + " and " +
                   std::to_string(second) + " do not commute"),
        first_(first),
        second_(second) {}

  std::pair<std::size_t, std::size_t> witness() const { return {first_, second_}; }

 private:
  std::size_t first_;
  std::size_t second_;
};

class NotNilpotentAtLambda : public InputError {
 public:
  using InputError::InputError;
};

class IrrationalEigenvalue : public InputError {
 public:
  using InputError::InputError;
};

class InvalidOperator : public InputError {
 public:
  using InputError::InputError;
};

class ClosureViolation : public InvariantViolation {
 public:
  ClosureViolation(std::size_t element, const std::string& residual)
      : InvariantViolation("derivative of basis element " + std::to_string(element) +
                           " leaves the space: " + residual),
        element_(element) {}

  std::size_t element() const { return element_; }

 private:
  std::size_t element_;
};

class SpanMismatch : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

}  // namespace symkit
