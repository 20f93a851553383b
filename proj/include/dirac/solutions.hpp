#pragma once

#include "dirac/operators.hpp"

namespace dirac {

// Exponential prefactor that a stored profile pair is normalized by.  Raw
// solution components are profile * prefactor; the library never multiplies
// the prefactor back in internally.
enum class Prefactor { ExpPlus, ExpMinus, ExpOneMinus }; // e^{i mu x}, e^{-i mu x}, e^{i mu (1-x)}

cd prefactor_value(Prefactor pf, cd mu, double x);

struct ProfilePair {
    GridFunction one; // first component profile
    GridFunction two; // second component profile
    Prefactor pf = Prefactor::ExpPlus;
};

// Cauchy solutions carry both e^{i mu x} and e^{-i mu x} parts per component.
struct TwoPhaseComponent {
    GridFunction plus;  // coefficient of e^{i mu x}
    GridFunction minus; // coefficient of e^{-i mu x}
};

// Direct fixed-point (Picard) solution of the boundary integral system.  An
// independent code path: composite Gauss-Lobatto quadrature on pointwise
// exponential evaluations, no closed-form moments and no K-operator code.
struct DirectResult {
    ProfilePair w_part; // profile of the C1-driven solution, prefactor e^{i mu x}
    ProfilePair v_part; // profile of the C2-driven solution, prefactor e^{i mu (1-x)}
    cd C1{1.0, 0.0}, C2{0.0, 0.0};
    int iterations = 0;
    double residual = 0.0;

    // Raw components C1*w + C2*v at a point (may overflow for extreme Im mu).
    cd raw1(cd mu, double x) const;
    cd raw2(cd mu, double x) const;
};
DirectResult solve_direct(const Potential& pot, cd mu, cd C1, cd C2, double tol = 1e-12,
                          const GridPtr& grid = nullptr);

// Fundamental pair and derived Cauchy matrix, all profile-level.
struct FundamentalSet {
    ProfilePair w; // prefactor e^{i mu x};    w1(0)=1, w2(1)=0
    ProfilePair v; // prefactor e^{i mu (1-x)}; v1(0)=0, v2(1)=1
    TwoPhaseComponent c1, c2; // first column of the Cauchy matrix
    TwoPhaseComponent s1, s2; // second column
    cd w2_at_0;               // raw w2(0)
    cd v2_at_0;               // raw v2(0) = e^{i mu} z2(0)
    cd z2_at_0;               // profile-level normalizer
    GridFunction det_profile; // (w1 v2 - w2 v1) e^{-i mu}, constant = z2(0)
    bool via_fallback = false; // solutions obtained from the direct solver
    int terms_w = 0, terms_v = 0;
};

ProfilePair fundamental_w(const Potential& pot, cd mu, double tol = 1e-10,
                          bool allow_fallback = true, bool* used_fallback = nullptr,
                          const GridPtr& grid = nullptr, int* terms = nullptr);
ProfilePair fundamental_v(const Potential& pot, cd mu, double tol = 1e-10,
                          bool allow_fallback = true, bool* used_fallback = nullptr,
                          const GridPtr& grid = nullptr, int* terms = nullptr);

// Builds w, v and the Cauchy solutions c = w - (w2(0)/v2(0)) v, s = v / v2(0)
// (identity initial matrix at x = 0).  Throws DegenerateNormalizer when the
// profile-level |z2(0)| < 1e-8.
FundamentalSet cauchy_solutions(const Potential& pot, cd mu, double tol = 1e-10,
                                bool allow_fallback = true, const GridPtr& grid = nullptr);

} // namespace dirac
