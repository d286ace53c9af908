#pragma once

#include <stdexcept>
#include <string>

namespace rydmol {

/// Rejected input: violated precondition, malformed file or config entry.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (non-convergence, grid too coarse, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rydmol
