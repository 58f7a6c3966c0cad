#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace infharm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or violated precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a point where an expression is not C^2 (log of a
/// non-positive number, fractional power at zero, division by zero, ...).
class SingularPointError : public Error {
 public:
  explicit SingularPointError(const std::string& what, std::vector<double> point = {});

  const std::vector<double>& point() const { return point_; }
  /// Copy of this error with the evaluation point attached.
  SingularPointError at(std::vector<double> point) const;
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
  std::vector<double> point_;
};

class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

class UnknownIdError : public Error {
 public:
  using Error::Error;
};

/// A construction's numerical precondition check failed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DegenerateProbeError : public Error {
 public:
  using Error::Error;
};

class VanishingEnergyError : public Error {
 public:
  using Error::Error;
};

class InfeasibleConstantError : public Error {
 public:
  using Error::Error;
};

class WrongRegimeError : public Error {
 public:
  using Error::Error;
};

class InvalidFactorError : public Error {
 public:
  using Error::Error;
};

class OutOfBallError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in an expression or a map description, with 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

}  // namespace infharm
