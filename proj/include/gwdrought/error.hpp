#pragma once

#include <stdexcept>
#include <string>

namespace gwd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a series is too short, too sparse, or lacks the history an
/// operation needs. The CLI maps it to exit code 4.
class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace gwd
