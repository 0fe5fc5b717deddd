#pragma once

#include <stdexcept>
#include <string>

namespace h10 {

// Base class for all errors raised by the library.  Everything carries a
// human-readable message; subclasses add structured fields where callers
// need them programmatically.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised on malformed equation text.  `position` is the zero-based byte
// offset into the input at which the problem was detected.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// Invalid configuration: mismatched dimensions, out-of-range parameters,
// budgets exceeded, and the like.
struct ConfigError : Error {
    using Error::Error;
};

// A numerical procedure failed to meet its own accuracy contract
// (non-convergence, failed consistency check, ...).
struct NumericsError : Error {
    using Error::Error;
};

// A requested state or operation does not fit in the truncated space with
// acceptable error.  The message always says which cutoff to raise.
struct TruncationError : Error {
    using Error::Error;
};

}  // namespace h10
