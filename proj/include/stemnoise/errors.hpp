#pragma once

#include <stdexcept>
#include <string>

namespace stemnoise {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read, decoded, or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Structured text input (manifest, CSV) does not match the expected layout.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Image or map too small for the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input is valid but carries too little variation for the operation
/// (constant vectors, fewer distinct values than requested classes).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

} // namespace stemnoise
