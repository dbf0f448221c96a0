#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace vmflow {

// Base class for all toolkit errors; CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file (JSON syntax, wrong value type).
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input violating a model invariant; message names the field.
struct ValidationError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of an operation (e.g. Z <= 0).
struct DomainError : Error {
    using Error::Error;
};

// Closure Newton left the physical branch (iteration budget, or A_2 crossed zero).
struct BranchLoss : Error {
    using Error::Error;
};

// No sign change of the wall-velocity functional in the expanded C-bar bracket.
struct BracketFailure : Error {
    using Error::Error;
};

// min(alpha2) <= 0: the diagonalizing transformation is singular.
struct SingularTransform : Error {
    using Error::Error;
};

// Pencil assembly precondition broken (grid mismatch, missing profile nodes).
struct AssemblyError : Error {
    using Error::Error;
};

// Shift equals an eigenvalue to machine precision; caller retries a perturbed shift.
struct FactorizationSingular : Error {
    using Error::Error;
};

// Filesystem failure while emitting an output artifact.
struct IOError : Error {
    using Error::Error;
};

// Iteration budget exhausted; carries the last residuals for diagnosis.
struct NoConvergence : Error {
    std::map<std::string, double> residuals;
    explicit NoConvergence(const std::string& msg,
                           std::map<std::string, double> res = {})
        : Error(msg), residuals(std::move(res)) {}
};

}  // namespace vmflow
