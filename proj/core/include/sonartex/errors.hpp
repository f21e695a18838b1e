#pragma once

#include <stdexcept>
#include <string>

namespace sonartex {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, configs or flags. The CLI maps this to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Filesystem or OS failure. The CLI maps this to exit code 2.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (WAV, CSV, config). The CLI maps this to exit code 2.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Signal cannot be scored (zero variance, too short).
class DegenerateSignalError : public Error {
public:
    using Error::Error;
};

} // namespace sonartex
