#pragma once

#include <stdexcept>
#include <string>

namespace steerlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments, malformed documents, register mismatches.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A dimension or enumeration cap would be exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// An iterative method failed to converge or produced an unusable value.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace steerlab
