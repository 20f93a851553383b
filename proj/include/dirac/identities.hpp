#pragma once

#include "dirac/solutions.hpp"

namespace dirac {

// Exact integral identities and measured inequalities of the operator
// calculus.  Exact ids compare two independently evaluated integral forms;
// bound ids return measured value vs budget (pass when lhs <= rhs + slack).
// Two-row bounds pack their j=1/j=2 (or n=1/n=2) values into the real and
// imaginary slots of lhs/rhs.
enum class IdentityId {
    DecompK1,            // K1 e = K11 e + K12 e (operator vs split parts)
    DecompK2,            // K2 e = K21 e + K22 e
    K2ForwardWindow,     // (K2 e)(0) - (K2 e)(x) = forward double integral
    K1RankOneDefect,     // G1(x) B2(1) - e^{2imux}(K1 e)(x) = weighted forward integral
    K2PhaseMoment,       // phase moment of K2 e collapses to a triple integral
    K1PhaseMoment,       // phase moment of K1 e collapses to a triple integral
    K1Truncation,        // |(K1 e)(x) - (K11 e)(x)| <= gamma01(x) gamma02(x)
    K2Truncation,        // |(K2 e)(x) - (K21 e)(x)| <= gamma01(x) gamma02(x)
    SplitSum,            // |(K11 e)(x) + (K21 e)(x) - (K11 e)(1)| <= gamma01 gamma02
    FirstPowerBound,     // ||K1 e|| <= ||s1||_p gamma2 ; ||K2 e|| <= ||s2||_p gamma1
    EvenPowerBound,      // ||K1^{2n} e|| <= (a gamma1)^n, n = 1, 2
    SquarePowerRatio,    // ||K_j^2 e|| vs gamma~ (measured ratio, honesty-capped)
    QuadrupleStripBound, // |L(x,mu)| <= 2 e^{4d} ||s1||_{L1} alpha~(mu), |Im mu| <= d
    Reflection           // conjugate-phase kernels equal swapped couplings at -mu
};

const char* identity_name(IdentityId id);

struct IdentityResult {
    IdentityId id;
    cd lhs;
    cd rhs;
    double residual;      // |lhs - rhs| for exact ids, max(measured - budget, 0) for bounds
    double rel_residual;  // residual / max(|lhs|, |rhs|, 1e-12)
    bool is_bound;        // inequality row
    bool pass;
    bool applicable = true; // e.g. the strip bound outside |Im mu| <= d
};

// Evaluate one identity at (mu, x).  d is the strip half-width for the
// quadruple bound.
IdentityResult identity_eval(const Potential& pot, IdentityId id, cd mu, double x,
                             double exact_tol = 1e-8, double d = 1.0);

std::vector<IdentityId> all_identities();

} // namespace dirac
