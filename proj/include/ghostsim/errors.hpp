#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ghostsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the physical domain of a model (e.g. wavelength outside the
/// Sellmeier validity band, signal shorter than the pump).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed argument (empty grid, mismatched units, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// No cut angle in (0, pi/2) phase matches the requested interaction.
class UnsolvableGeometryError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not reach its accuracy target. Carries the best estimate
/// that was reached and the error bound attached to it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::complex<double> estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  std::complex<double> estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  std::complex<double> estimate_;
  double error_bound_;
};

/// The sample spacing of a discrete transform cannot represent the requested
/// target span without wrap-around.
class AliasingError : public Error {
 public:
  AliasingError(const std::string& what, double required_spacing)
      : Error(what), required_spacing_(required_spacing) {}

  /// Largest sample spacing that would avoid aliasing on the requested span.
  double required_spacing() const noexcept { return required_spacing_; }

 private:
  double required_spacing_;
};

/// Profile has no well-defined peak (flat, empty, or unbracketed).
class MetricsError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ghostsim
