#pragma once

#include <stdexcept>
#include <string>

namespace squeezelab {

// Base class for all library errors. Every failure mode thrown by the
// library derives from this, so callers can catch one type at the CLI
// boundary and map subtypes to exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input-format and validation failures.
struct SyntaxError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct HermiticityError : Error {
    using Error::Error;
};
struct SymmetryError : Error {
    using Error::Error;
};
// Carries the offending minimal eigenvalue of the quadratic-form block matrix.
struct NotPositiveDefinite : Error {
    double min_eigenvalue;
    NotPositiveDefinite(const std::string& msg, double min_eig)
        : Error(msg), min_eigenvalue(min_eig) {}
};
struct DimensionMismatch : Error {
    using Error::Error;
};

// Squeeze-operator construction failures.
struct BranchCutError : Error {
    using Error::Error;
};
struct NotOneMode : Error {
    using Error::Error;
};
struct NotTwoMode : Error {
    using Error::Error;
};

// State-evaluation guards.
struct DegreeTooLarge : Error {
    using Error::Error;
};
struct SingularQuadratureFrame : Error {
    using Error::Error;
};

// Oracle resource guards.
struct SpaceTooLarge : Error {
    using Error::Error;
};
struct TailMassTooLarge : Error {
    double norm_deficit;
    int suggested_cutoff;
    TailMassTooLarge(const std::string& msg, double deficit, int suggestion)
        : Error(msg), norm_deficit(deficit), suggested_cutoff(suggestion) {}
};
struct NotAntiHermitian : Error {
    using Error::Error;
};

}  // namespace squeezelab
