#pragma once

#include "dirac/solutions.hpp"

namespace dirac {

// Asymptotic approximant families, by declared remainder class:
//   R : gamma~(mu)                  (leading term + first correction)
//   S : Lambda(x,mu), pointwise     (leading term)
//   T : gamma-sum, pointwise        (free solution)
//   Main1C / Main1S : Cauchy-matrix columns, remainder gamma~ with
//                     two-phase normalizer
//   C73W / C73V : mu^{-1} first-order perturbed tiers, remainder rho(mu)
//   SL : second-order reduction tier, remainder rho(mu)
enum class Tier { R, S, T, Main1C, Main1S, C73W, C73V, SL };
enum class Target { W, V };

const char* tier_name(Tier t);
Tier tier_from_name(const std::string& name);

// Prediction for w or v at tiers R/S/T, profile-level (same prefactor as the
// target).  remainder_at(x) is the declared remainder functional.
struct TierPrediction {
    ProfilePair profile;
    // Declared remainder: scalar for R (gamma~), pointwise for S/T.
    GridFunction remainder; // real-valued profile; for R constant gamma~
    double scalar_remainder = 0.0;
};
TierPrediction approx_tier(const Potential& pot, cd mu, Tier tier, Target target,
                           const GridPtr& grid);

// Cauchy-matrix predictions (two-phase): the explicit double/triple iterated
// integrals plus the quadruple integral L for the first column.
struct CauchyPrediction {
    TwoPhaseComponent c1, c2; // valid for Main1C
    TwoPhaseComponent s1, s2; // valid for Main1S
    double gamma_tilde = 0.0;
};
CauchyPrediction approx_main1(const Potential& pot, cd mu, const GridPtr& grid);

// L(x,mu) = int_0^x e^{2i mu (x-t)} sigma1(t) int_0^t sigma2(s)
//              int_0^s e^{2i mu (s-tau)} sigma1(tau)
//                 int_0^tau e^{2i mu y} sigma2(y) dy dtau ds dt
// Built from the innermost profile outward, three weighted integrations.
GridFunction quadruple_L(const Potential& pot, cd mu, const GridPtr& grid);
cd quadruple_L_at(const Potential& pot, cd mu, double x);

// Sup-normalized tier errors against computed solutions; used by the sweep.
struct TierErrors {
    double sup_error = 0.0;
    double remainder = 0.0; // declared remainder at the ratio-maximizing x
    double ratio = 0.0;     // sup_x error(x) / remainder(x)
};
TierErrors measure_tier(const Potential& pot, cd mu, double r, Tier tier,
                        const FundamentalSet& fs, const GridPtr& grid);

} // namespace dirac
