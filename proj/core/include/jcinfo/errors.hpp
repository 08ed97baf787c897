#ifndef JCINFO_ERRORS_HPP
#define JCINFO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jcinfo {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical parameter is outside its domain (e.g. negative alpha).
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// Arguments are inconsistent with each other (mismatched sizes, bad moment order).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Numerical setup rejected before any work is done (quadrature floors, sweep ranges).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Fock truncation too small for the requested accuracy.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Phase-space grid fails to capture the Husimi mass.
class GridCoverageError : public Error {
 public:
  using Error::Error;
};

/// A computed quantity violates a hard numerical invariant.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace jcinfo

#endif  // JCINFO_ERRORS_HPP
