#pragma once

#include <stdexcept>
#include <string>

namespace backflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration rejected before any physics runs. `field()` names the offending key path.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Argument outside the mathematical domain of an operation (negative time, non-positive mass).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Pulse or event scheduled before the end of the history it is appended to.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// The two arms never meet after the requested time.
class NoEncounterError : public Error {
 public:
  NoEncounterError(const std::string& message, double min_separation)
      : Error(message), min_separation_(min_separation) {}

  double min_separation() const noexcept { return min_separation_; }

 private:
  double min_separation_;
};

/// Inputs disagree with each other (trajectory vs encounter time, envelopes at combination).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Occupied wavenumbers reach the Nyquist limit of the sampling grid.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// Numerical propagation pushed density onto the edge of a periodic grid.
class GridEdgeError : public Error {
 public:
  using Error::Error;
};

}  // namespace backflow
