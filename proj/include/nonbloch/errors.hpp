#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nonbloch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a resolvent solve is requested too close to the spectrum.
struct NearSpectrumError : Error {
  NearSpectrumError(const std::string& what, double diagnostic)
      : Error(what), diagnostic(diagnostic) {}
  double diagnostic;  // reciprocal condition estimate, or residual ratio
};

/// Coulomb potential evaluated on (or numerically on) an eigenvalue.
struct SingularPotentialError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace nonbloch
