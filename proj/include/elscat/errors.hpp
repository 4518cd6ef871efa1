#pragma once

#include <stdexcept>
#include <string>

namespace elscat {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (t <= 0, omega <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Requested Hankel order lies outside the range the recurrences are stable for.
class OrderOverflowError : public Error {
 public:
  using Error::Error;
};

// A_n of the DtN expansion is numerically singular for the reported mode.
class SingularModeError : public Error {
 public:
  SingularModeError(int mode, const std::string& what) : Error(what), mode_(mode) {}
  int mode() const { return mode_; }

 private:
  int mode_;
};

// Vector lengths, grids or meshes that must agree do not.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Factorization or solve of the discrete boundary value problem failed.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

// Invalid configuration, preset or file contents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace elscat
