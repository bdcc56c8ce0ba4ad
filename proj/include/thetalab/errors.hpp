#pragma once

#include <stdexcept>
#include <string>

namespace thetalab {

// Input violates an operation's precondition (bad rank, point on a wall,
// malformed matrix, ...).  The CLI maps this to exit code 2.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string &msg) : std::runtime_error(msg) {}
};

// A cross-checked identity failed.  The CLI maps this to exit code 3.
struct VerificationError : std::runtime_error {
    explicit VerificationError(const std::string &msg) : std::runtime_error(msg) {}
};

// The chosen base point turned out to be non-generic (a bend point landed on
// a wall boundary, a segment passed through the origin, ...).  Callers that
// own the base point catch this and retry with a perturbed point.
struct GenericityError : PreconditionError {
    explicit GenericityError(const std::string &msg) : PreconditionError(msg) {}
};

// A coefficient matrix lacks the sign data needed for a mutation rewrite.
struct DegenerateCoefficientsError : PreconditionError {
    explicit DegenerateCoefficientsError(const std::string &msg) : PreconditionError(msg) {}
};

} // namespace thetalab
