#pragma once

#include <stdexcept>
#include <string>

namespace mnpq {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the domain of a physical formula (negative frequency,
/// QD overlapping the particle, correction outside its validity range...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Numerical failure: non-convergence, singular system, step-size underflow,
/// loss of positivity.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Step-size underflow in the explicit integrator.
class StiffnessError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ConfigError : public Error {
public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace mnpq
