#pragma once

#include <stdexcept>
#include <string>

namespace oamtilt {

// Base of every error thrown by the library. The CLI maps the subclasses to
// exit codes: ConfigError/DomainError/StructuralError -> 2,
// NumericalError -> 3, IoError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs violate a documented precondition (bad parameter, undersized grid).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two objects that must agree structurally do not (grid mismatch, circle
// outside the grid).
class StructuralError : public Error {
 public:
  using Error::Error;
};

// The computation itself cannot produce a meaningful answer (nodal circle,
// degenerate spectrum, flat pattern, oracle disagreement).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace oamtilt
