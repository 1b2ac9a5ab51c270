#pragma once

#include <stdexcept>
#include <string>

namespace gbmc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |F'(u)| >= a (scalar) or |lambda_h| >= a_h (systems).
class SubcharacteristicViolation : public Error {
 public:
  using Error::Error;
};

/// |E+| + |E-| == 0 (or |D+| + |D-| == 0) in a cell; callers skip the cell.
class DegenerateCell : public Error {
 public:
  using Error::Error;
};

/// A negative equilibrium was met by a solver variant that needs E+- >= 0.
class NegativeEquilibrium : public Error {
 public:
  using Error::Error;
};

class NegativeDepth : public Error {
 public:
  using Error::Error;
};

class NegativeDensity : public Error {
 public:
  using Error::Error;
};

/// Initial datum with zero L1 norm; nothing to sample.
class ZeroMass : public Error {
 public:
  using Error::Error;
};

/// Initial datum with zero total variation; nothing to sample.
class ZeroVariation : public Error {
 public:
  using Error::Error;
};

class CflViolation : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class ZeroReference : public Error {
 public:
  using Error::Error;
};

/// Malformed input (bad config value, CSV schema mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace gbmc
