#pragma once

#include <stdexcept>
#include <string>

namespace wdc {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (formula, literal, JSON shape, CLI assignment, ...).
struct parse_error : error {
    parse_error(const std::string& msg, size_t pos = std::string::npos)
        : error(pos == std::string::npos ? msg : msg + " (at offset " + std::to_string(pos) + ")"),
          position(pos) {}
    size_t position;
};

// A configured resource cap (subset base, step budget, fixpoint stages) was hit.
struct cap_exceeded : error {
    using error::error;
};

// Strict-mode simulation found branches still alive at the step bound.
struct live_branches : error {
    using error::error;
};

// Structurally valid input that violates a semantic precondition
// (fragment violation, arity mismatch, non-positive fixpoint body, ...).
struct invalid_argument_error : error {
    using error::error;
};

}  // namespace wdc
