#pragma once

#include <stdexcept>
#include <string>

namespace bqke {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid group parameters, coprimality violations, bad root indices,
// malformed configuration.  The CLI maps these to exit code 2.
struct InvalidSpecError : Error {
    using Error::Error;
};

// Division by zero in exact arithmetic.
struct DivisionByZeroError : Error {
    using Error::Error;
};

// psi(gamma) evaluated at an element with gamma_11 == 1 (the identity).
struct PoleError : Error {
    using Error::Error;
};

// Enumeration or series work would exceed a configured cap.
struct CapExceededError : Error {
    using Error::Error;
};

// An internal exact assertion failed (two routes disagree, a sum that must
// be rational is not, ...).  Signals a fault, never expected in normal runs.
struct CheckFailError : Error {
    using Error::Error;
};

}  // namespace bqke
