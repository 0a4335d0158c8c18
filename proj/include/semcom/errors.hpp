#pragma once

#include <stdexcept>
#include <string>

namespace semcom {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configuration file or configuration object failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A posterior was requested from a window holding no observations.
class EmptyWindow : public Error {
 public:
  EmptyWindow() : Error("observation window is empty") {}
};

/// The noisy kernel matrix could not be Cholesky-factorized.
class SingularCovariance : public Error {
 public:
  SingularCovariance() : Error("covariance matrix is not positive definite") {}
};

/// The acquisition step was asked to score zero candidates.
class EmptyCandidateSet : public Error {
 public:
  EmptyCandidateSet() : Error("candidate set is empty") {}
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace semcom
