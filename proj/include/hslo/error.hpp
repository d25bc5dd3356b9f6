#pragma once

#include <stdexcept>
#include <string>

namespace hslo {

/// Base of every exception thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain an operation accepts.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A layout breaks the non-overlap rule.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

/// The linear system has no unique solution (e.g. no Dirichlet nodes).
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// An iterative or refined solve failed to reach the requested residual.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace hslo
