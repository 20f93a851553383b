#pragma once

#include "dirac/approx.hpp"
#include "dirac/solutions.hpp"

namespace dirac {

// First-order system with the mu^{-1} perturbation block P, solved around the
// unperturbed fundamental pair via the resolvent-kernel fixed point
//   Z = Z0 + mu^{-1} A_j Z.
struct PerturbedSystem {
    Potential pot;            // carries sigma1, sigma2 and P
    cd mu;
    FundamentalSet base;      // unperturbed w, v and normalizer
    GridPtr grid;
};
PerturbedSystem make_perturbed(const Potential& pot, cd mu, double tol = 1e-10,
                               const GridPtr& grid = nullptr);

// A_1 (j=1, e^{i mu x} family) and A_2 (j=2, e^{i mu (1-x)} family), acting on
// profile pairs.  Anchored throughout: no exponentially large intermediates.
ProfilePair apply_A(const PerturbedSystem& sys, int j, const ProfilePair& z);

struct PerturbedResult {
    ProfilePair z;        // profile of the perturbed solution
    int iterations = 0;
    double residual = 0.0; // sup defect of the fixed-point equation
};
// j = 1 solves for the perturbed W-family (base profile w), j = 2 for the
// V-family (base v).  Throws ContractionFailure when successive-difference
// ratios exceed 0.9.
PerturbedResult solve_perturbed(const PerturbedSystem& sys, int j, double tol = 1e-10);

// Explicit mu^{-1} first-order predictions with remainder rho(mu).
ProfilePair approx_C73(const PerturbedSystem& sys, int j);

// Crude operator-norm probe: max sup-amplification of A_j over n random
// unit-sup profile pairs (deterministic seed).
double measure_A_norm(const PerturbedSystem& sys, int j, int probes = 20,
                      unsigned long long seed = 1234);

// ---- second-order (square-integrable derivative-potential) pathway ----

// Reduction of  y'' + q y + mu^2 y = 0, q = sigma', to the first-order system:
// couplings sigma1 = sigma2 = sigma and P = (i/2) tau [[1,1],[-1,-1]],
// tau = sigma^2 (re-projected to the degree cap on a refined mesh).
Potential sl_reduce(const PiecewisePoly& sigma);

// Quasi-derivative pair (y, y^[1] = y' + sigma y) at profile level.
struct QuasiDerivativePair {
    GridFunction y;       // profile of y
    GridFunction y_quasi; // profile of y^[1]
    Prefactor pf;
};

struct SlResult {
    QuasiDerivativePair y1; // from the perturbed W family, prefactor e^{i mu x}
    QuasiDerivativePair y2; // from the perturbed V family, prefactor e^{i mu (1-x)}
    PerturbedSystem sys;
    int iterations_1 = 0, iterations_2 = 0;
};
SlResult sl_fundamental(const PiecewisePoly& sigma, cd mu, double tol = 1e-10);

// Explicit second-order asymptotic predictions with remainder rho(mu).
struct SlPrediction {
    GridFunction y1_profile;
    GridFunction y2_profile;
    double rho = 0.0;
};
SlPrediction sl_predictions(const SlResult& sl);

// L1 norm of the defect of (y^[1])' - sigma y^[1] + (sigma^2 + mu^2) y = 0,
// evaluated through analytic differentiation of the integral representation.
double sl_plugback_residual(const SlResult& sl, int which /*1|2*/);

} // namespace dirac
