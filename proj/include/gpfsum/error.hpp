#pragma once

#include <stdexcept>
#include <string>

namespace gpfsum {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed caller input (bad flag values, out-of-range configuration).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Input is well formed but outside the range where a result is proven
/// (for example a remainder bound requested below its validity threshold).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: non-finite intermediate, series that did not reach
/// its truncation target, memory cap exceeded.
class ComputationError : public Error {
public:
    using Error::Error;
};

/// Checkpoint or report file could not be read, written or trusted.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace gpfsum
