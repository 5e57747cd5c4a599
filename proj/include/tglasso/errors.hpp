#pragma once
#include <stdexcept>
#include <string>

namespace tglasso {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Matrix or tree dimensions disagree.
class DimensionError : public Error
{
public:
    using Error::Error;
};

/// Invalid parameter value (λ, ρ, fold count, simulation spec, ...).
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// Input data violates a precondition (non-finite values, constant
/// columns, malformed trees or distance matrices).
class InputError : public Error
{
public:
    using Error::Error;
};

/// Numerical failure inside the solver, e.g. a singular system.
class SolverError : public Error
{
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error
{
public:
    using Error::Error;
};

} // namespace tglasso
