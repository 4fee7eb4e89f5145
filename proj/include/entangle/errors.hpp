#pragma once

#include <stdexcept>
#include <string>

namespace entangle {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid physical parameter or configuration input. CLI exit code 1.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent configuration file / flags. CLI exit code 1.
class ConfigError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Argument outside an operation's mathematical domain (t <= 0, |z| too small
/// for an asymptotic expansion, ...). CLI exit code 2.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical failure at runtime: quadrature norm check, overflow, resonant
/// denominator, non-convergence. CLI exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace entangle
