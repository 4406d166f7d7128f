#pragma once

#include <stdexcept>
#include <string>

namespace projstat {

// Precondition and configuration violations use std::invalid_argument.

/// Malformed or out-of-range input data (files, samples, offsets outside bins).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative or randomized procedure failed to reach its target.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace projstat
