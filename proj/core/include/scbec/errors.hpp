#pragma once

#include <stdexcept>
#include <string>

namespace scbec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Field evaluated on (or within the guard distance of) a current filament.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its iteration cap or tolerance floor.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The potential has a non-positive curvature at the candidate minimum.
class NotATrapError : public Error {
 public:
  using Error::Error;
};

/// A transport protocol failed at a specific ramp step.
class ProtocolError : public Error {
 public:
  ProtocolError(std::size_t step, const std::string& what)
      : Error("ramp step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Grid cannot resolve the expected fringe period.
class SamplingResolutionError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampler acceptance dropped below the usable floor.
class SamplerInefficiencyError : public Error {
 public:
  using Error::Error;
};

/// Configuration file problem; the message names the line and key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace scbec
