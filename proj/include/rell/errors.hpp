#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace rell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input lies on (or numerically too close to) a singularity of the evaluated object.
class SingularInput : public Error {
 public:
  using Error::Error;
};

/// Quadrature or root-finding failed to reach the requested tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A polynomial has an irreducible factor of degree >= 2 over Q(sqrt(-3)), or a
/// computation needs an algebraic extension the library does not support.
class IrreducibleOverField : public Error {
 public:
  using Error::Error;
};

class NotAPole : public Error {
 public:
  using Error::Error;
};

class NotASingularity : public Error {
 public:
  using Error::Error;
};

class IrregularSingular : public Error {
 public:
  using Error::Error;
};

/// A transport path passes closer to a singular point than the declared clearance.
class SingularityTooClose : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or command-line value.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Raised by the orbit integrator when the trajectory runs into a singular configuration.
class SingularEncounter : public Error {
 public:
  SingularEncounter(const std::string& what, double time, std::array<double, 4> state)
      : Error(what), time_(time), state_(state) {}
  double time() const { return time_; }
  /// (q1, q2, p1, p2) at the last accepted step before the encounter.
  const std::array<double, 4>& state() const { return state_; }

 private:
  double time_;
  std::array<double, 4> state_;
};

}  // namespace rell
