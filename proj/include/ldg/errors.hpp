#pragma once
// Error taxonomy. Every failure mode that callers are expected to handle has
// its own type so tests can assert on the exact condition; all inherit from
// Error so the CLI can map them to exit codes in one place.

#include <stdexcept>
#include <string>

namespace ldg {

// Base class. what() always carries the offending values, not just a name.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user input / configuration (CLI exit code 2).
struct ValidationError : Error {
    using Error::Error;
};

// --- sym3core ---------------------------------------------------------------
// Largest two eigenvalues tie within tolerance: the nearest rank-1 projection
// is not unique. Signals the defect core.
struct AmbiguousProjection : Error {
    using Error::Error;
};

// --- domain ------------------------------------------------------------------
struct CircleOutOfDomain : ValidationError {
    using ValidationError::ValidationError;
};
struct DiscOutOfDomain : ValidationError {
    using ValidationError::ValidationError;
};

// --- flow ---------------------------------------------------------------------
// Energy went up beyond round-off slack: a time-step stability violation.
struct EnergyIncrease : Error {
    using Error::Error;
};
struct MaxIterations : Error {
    using Error::Error;
};
// epsilon < 2h: the defect core cannot be represented on the grid.
struct CoreUnresolved : ValidationError {
    using ValidationError::ValidationError;
};

// --- analysis ------------------------------------------------------------------
struct NoDefect : Error {
    using Error::Error;
};
struct MultipleDefects : Error {
    using Error::Error;
};
struct InsufficientSupport : Error {
    using Error::Error;
};
struct LatitudeTooLarge : Error {
    using Error::Error;
};
// Accumulated phase around a circle is not the expected multiple of pi.
struct UnwrapInconsistent : Error {
    using Error::Error;
};
struct DegenerateLambda : Error {
    using Error::Error;
};
// Boundary integral of j.nu fails to close: tangential potential data invalid.
struct ClosureDefect : Error {
    using Error::Error;
};
struct SingularOverlap : Error {
    using Error::Error;
};

// --- cli ------------------------------------------------------------------------
struct CheckpointFormatError : Error {
    using Error::Error;
};

}  // namespace ldg
