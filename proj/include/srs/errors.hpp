#pragma once

#include <stdexcept>
#include <string>

namespace srs {

/// Base class of every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Atom count outside what a basis mask can hold.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Operands built for different atom counts (or otherwise incompatible).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A quantity that has no value for the given input (zero-norm state,
/// too-short series, degenerate fit).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

/// Exact computation would exceed a configured memory or branch budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Missing or inconsistent model/run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace srs
