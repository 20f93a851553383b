#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

// Thrown when an input violates a documented precondition (bad mesh, bad
// exponent, mismatched grids, ...).
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Potential definition file could not be parsed.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Neumann series gate a*gamma_j(mu) <= 1/2 failed.
struct GateViolation : std::runtime_error {
    double gate; // measured a*gamma_j
    explicit GateViolation(double g)
        : std::runtime_error("series gate violated: a*gamma = " + std::to_string(g)), gate(g) {}
};

// Fixed-point iteration (direct solver) failed to reach its residual target.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |z2(0)| too small to normalize the Cauchy solutions.
struct DegenerateNormalizer : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Perturbed fixed-point iteration is not contracting (|mu| too small).
struct ContractionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dirac
