#pragma once

#include <stdexcept>
#include <string>

namespace ppc {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field-level failures: zero inverse, not enough distinct points, bad prime.
struct FieldError : Error {
    using Error::Error;
};

// Matrix dimension mismatches and ragged grids.
struct ShapeError : Error {
    using Error::Error;
};

// Block counts that do not divide the matrix dimensions.
struct PartitionError : Error {
    using Error::Error;
};

// Duplicate interpolation points.
struct SingularError : Error {
    using Error::Error;
};

// Not enough sub-results to decode.
struct DecodeError : Error {
    using Error::Error;
};

// Invalid session or timing parameters.
struct SpecError : Error {
    using Error::Error;
};

// Malformed matrix files or config input.
struct ParseError : Error {
    using Error::Error;
};

} // namespace ppc
