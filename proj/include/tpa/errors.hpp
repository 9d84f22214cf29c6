#pragma once

#include <stdexcept>
#include <string>

namespace tpa {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Singular or numerically unusable linear system.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// Harmonic truncation did not converge below the requested tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int n_max_reached, double last_change)
      : Error(what), n_max_reached_(n_max_reached), last_change_(last_change) {}
  int n_max_reached() const noexcept { return n_max_reached_; }
  double last_change() const noexcept { return last_change_; }

 private:
  int n_max_reached_;
  double last_change_;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double error_estimate)
      : Error(what), error_estimate_(error_estimate) {}
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

/// Bracketing failed in a root/extremum locator.
class LocatorFailure : public Error {
 public:
  using Error::Error;
};

/// A computed quantity violated a structural invariant it must satisfy.
class ConsistencyFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace tpa
