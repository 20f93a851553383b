#pragma once

#include "dirac/functionals.hpp"
#include "dirac/grid.hpp"

namespace dirac {

// The two coupled integral operators of the boundary formulation:
//   (K_1 z)(x) = int_0^x sigma1(t) int_t^1 e^{2i mu (s-t)} sigma2(s) z(s) ds dt
//   (K_2 z)(x) = int_x^1 sigma2(t) int_0^t e^{2i mu (t-s)} sigma1(s) z(s) ds dt
// Both cumulative profiles are retained on the grid, so evaluation anywhere
// is O(log #subcells).
GridFunction apply_K(const Potential& pot, cd mu, int j, const GridFunction& z);

// Split parts (j, part):
//   (1,1): int_0^x sigma2(s) { int_0^s e^{2i mu (s-t)} sigma1(t) dt } z(s) ds
//   (1,2): int_x^1 e^{2i mu s} sigma2(s) z(s) ds * int_0^x e^{-2i mu t} sigma1(t) dt
//   (2,1): int_x^1 sigma1(s) { int_s^1 e^{2i mu (t-s)} sigma2(t) dt } z(s) ds
//   (2,2): int_0^x e^{-2i mu s} sigma1(s) z(s) ds * int_x^1 e^{2i mu t} sigma2(t) dt
// The rank-one parts are evaluated in anchored form (both factors carry the
// phase relative to x), so no unbounded intermediate appears.
GridFunction apply_K_part(const Potential& pot, cd mu, int j, int part, const GridFunction& z);

// Reflected-kernel operators (phase conjugated):
//   (K_3 z)(x) = int_0^x sigma2(t) int_t^1 e^{-2i mu (s-t)} sigma1(s) z(s) ds dt
//   (K_4 z)(x) = int_x^1 sigma1(t) int_0^t e^{-2i mu (t-s)} sigma2(s) z(s) ds dt
// equal to K_1/K_2 with the couplings swapped and mu negated.
GridFunction apply_K_reflected(const Potential& pot, cd mu, int j, const GridFunction& z);

struct NeumannResult {
    GridFunction z;
    int terms_used = 0;
    double gate = 0.0; // a * gamma_j(mu)
};

// z_j = sum_n (-1)^n K_j^n e, truncated when a term's sup norm drops below
// tol * (1 - gate) (geometric tail), hard cap 64 terms.  Throws GateViolation
// when a * gamma_j(mu) > 1/2.
NeumannResult neumann_solve(const Potential& pot, cd mu, int j, double tol = 1e-10,
                            const GridPtr& grid = nullptr);

} // namespace dirac
