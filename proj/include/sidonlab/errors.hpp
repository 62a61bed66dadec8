#pragma once

#include <stdexcept>
#include <string>

namespace sidonlab {

// Base of every error the library raises. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands built for different groups, malformed element vectors.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A mathematical precondition does not hold (set not independent, norm too
// large, unsupported group shape, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configured work / size cap would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Parameters that make a computation vacuous or ill-posed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sidonlab
