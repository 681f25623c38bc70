#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frobkit {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different ambient dimensions.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Grade arithmetic is violated (overflow, h > k, pairing of unequal grades).
class GradeError : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the declared domain of a field.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A division node was evaluated on its declared singular locus.
class GuardViolation : public Error {
 public:
  using Error::Error;
};

/// The frame v_1 ∧ ... ∧ v_k vanishes at the queried point.
class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

/// A flow trajectory left the domain of its generating field.
class TrajectoryExit : public Error {
 public:
  using Error::Error;
};

/// A test form is not compactly supported in the working open set.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// A precondition of a verification check does not hold.
class PrecheckFailure : public Error {
 public:
  using Error::Error;
};

/// Syntax or semantic error in a field definition file, with 1-based location.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace frobkit
