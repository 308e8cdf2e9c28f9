#pragma once

#include <stdexcept>
#include <string>

namespace slexp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite or out-of-contract argument.
struct InvalidInputError : Error {
    using Error::Error;
};

// Mismatched field / grid / coefficient sizes.
struct DimensionError : Error {
    using Error::Error;
};

// Eigendecomposition missing, failed, or residual above tolerance.
struct DecompositionError : Error {
    using Error::Error;
};

// Scheme invoked without the history it requires (two-time-level schemes).
struct StateError : Error {
    using Error::Error;
};

// Degenerate closed-form configuration (e.g. vanishing quadratic leading coefficient).
struct SingularConfigError : Error {
    using Error::Error;
};

// Relative norm against a zero reference.
struct DivisionGuardError : Error {
    using Error::Error;
};

// Convergence study with no usable data points.
struct EmptyStudyError : Error {
    using Error::Error;
};

// Bad CLI/config usage.
struct UsageError : Error {
    using Error::Error;
};

// Solution magnitude exceeded the blow-up threshold; carries the step index.
struct BlowUpError : Error {
    long step_index;
    BlowUpError(const std::string& msg, long step)
        : Error(msg + " (step " + std::to_string(step) + ")"), step_index(step) {}
};

} // namespace slexp
