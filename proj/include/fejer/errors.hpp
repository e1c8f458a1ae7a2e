#pragma once

#include <stdexcept>

namespace fejer {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two objects that must live at the same net position (same p, same
// factor count, same length) do not.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonMonotonePath : public Error {
 public:
  using Error::Error;
};

// A point does not provide a coordinate the function depends on.
class MissingCoordinate : public Error {
 public:
  using Error::Error;
};

// A coefficient table does not cover the requested rectangle.
class MissingCoefficients : public Error {
 public:
  using Error::Error;
};

// Grid too coarse: aliasing of requested frequencies, or a quadrature
// that did not reach the requested tolerance.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fejer
