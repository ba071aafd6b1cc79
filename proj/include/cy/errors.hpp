#pragma once

#include <stdexcept>
#include <string>

namespace cy
{

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Input rejected before any computation (bad sizes, malformed config, ...).
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A geometric configuration is numerically degenerate: singular subset,
/// coincident lattice points, a vertex lying on an extra hyperplane.
class DegenerateError : public Error
{
public:
  using Error::Error;
};

/// A function cannot supply the derivative order an operation needs.
class CapabilityError : public Error
{
public:
  using Error::Error;
};

/// Unsupported numerical configuration (quadrature order, simplex dimension).
class ConfigurationError : public Error
{
public:
  using Error::Error;
};

} // namespace cy
