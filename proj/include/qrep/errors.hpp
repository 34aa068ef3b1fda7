#pragma once

#include <stdexcept>
#include <string>

namespace qrep {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Qubit count outside the supported range.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments: bad indices, out-of-range parameters, empty selections.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An operator failed a structural check (unitarity, Kraus completeness).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A density matrix is not diagonal in the GHZ basis.
class RepresentationError : public Error {
 public:
  using Error::Error;
};

/// A post-selected step had zero success probability.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// A quantity diverges (e.g. infinite waiting time).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid sweep configuration (command line or config file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrep
