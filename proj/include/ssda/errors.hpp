#pragma once

#include <stdexcept>
#include <string>

namespace ssda {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor shape / dimension mismatches.
struct ShapeError : Error {
    using Error::Error;
};

// Invalid arguments, configuration, or file contents.
struct ValueError : Error {
    using Error::Error;
};

// Filesystem and stream failures.
struct IoError : Error {
    using Error::Error;
};

// Non-finite values detected under strict numerics.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace ssda
