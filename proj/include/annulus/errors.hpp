#pragma once

#include <stdexcept>
#include <string>

namespace annulus {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameters or inconsistent configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: a solve or certificate could not be completed
/// (CLI exit code 3).
class NumericError : public Error {
public:
    using Error::Error;
};

class NearRational : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class OutOfDomain : public NumericError {
public:
    using NumericError::NumericError;
};

class NoConvergence : public NumericError {
public:
    using NumericError::NumericError;
};

class NotPeriodic : public NumericError {
public:
    using NumericError::NumericError;
};

class NotLifted : public NumericError {
public:
    using NumericError::NumericError;
};

class ItineraryViolation : public NumericError {
public:
    using NumericError::NumericError;
};

class ZeroOnBoundary : public NumericError {
public:
    using NumericError::NumericError;
};

class UnresolvedWinding : public NumericError {
public:
    using NumericError::NumericError;
};

class InvalidChain : public NumericError {
public:
    using NumericError::NumericError;
};

class AmbiguousLift : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NotInBasin : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace annulus
