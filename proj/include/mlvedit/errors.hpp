#pragma once

#include <stdexcept>
#include <string>

namespace mlv {

// Error taxonomy shared across the library. Every throwing path uses one of
// these classes so callers and tests can match on the failure kind.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A run parameter violates its constraints (k >= n, T = 0, ...).
class InvalidConfigError : public Error {
public:
    using Error::Error;
};

// Tensor or matrix dimensions do not line up.
class InvalidShapeError : public Error {
public:
    using Error::Error;
};

// An index is outside the valid domain of an operation.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

// A numeric value left the legal domain (NaN/Inf, zero feature vector).
class NumericDomainError : public Error {
public:
    using Error::Error;
};

// A sequencing contract was broken (inject before capture, double cache
// write, capture from the wrong segment).
class ProtocolError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure: missing file, short read, failed write.
class IoError : public Error {
public:
    using Error::Error;
};

// The bytes were read but do not form a valid document.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace mlv
