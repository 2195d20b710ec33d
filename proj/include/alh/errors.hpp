#pragma once

#include <stdexcept>
#include <string>

namespace alh {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure (root finder, ODE, interpolation) failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Inverse mean curvature flow hit the horizon or left the potential's domain.
class FlowError : public Error {
 public:
  using Error::Error;
};

/// An asymptotic limit could not be extracted to the requested accuracy.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a hypothesis of the static comparison (e.g. m0 > 0).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Input data is not a static vacuum solution to tolerance.
class NonStaticError : public Error {
 public:
  NonStaticError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace alh
