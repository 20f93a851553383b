#pragma once

#include <map>
#include <string>

#include "dirac/grid.hpp"

namespace dirac {

// A spectral sample in the half-plane Im mu > -r together with the constants
// entering the series gate: v(r) = 1 for r < 0 and e^{2r} otherwise, and
// a = 2 v(r)^2 ||max(|sigma1|,|sigma2|)||_{L^p}^3.
struct SpectralPoint {
    cd mu;
    double r = 0.0;
    double v_of_r = 1.0;
    double a_const = 0.0;
};
SpectralPoint make_spectral_point(const Potential& pot, cd mu, double r);

// gamma_{0,1}(x,mu) = |integral_0^x e^{2i mu (x-t)} sigma1(t) dt|
// gamma_{0,2}(x,mu) = |integral_x^1 e^{2i mu (t-x)} sigma2(t) dt|
// Scalar query, exact for the polynomial cells.
double gamma0(const Potential& pot, cd mu, int j, double x);
// Whole profile on a grid (values at every node).
GridFunction gamma0_profile(const Potential& pot, cd mu, int j, const GridPtr& grid);

// gamma_j(mu) = || gamma_{0,j}(., mu) ||_{L^q}, q conjugate to pot.p_exponent.
double gamma_lq(const Potential& pot, cd mu, int j, double q);

// gamma~(mu) = integral_0^1 ( |sigma2| gamma_{0,1}^2 + |sigma1| gamma_{0,2}^2 )
double gamma_tilde(const Potential& pot, cd mu);

// Lambda(x,mu) = gamma~ + gamma1^2 + gamma2^2 + gamma_{0,1}(x)^2 + gamma_{0,2}(x)^2
double lambda_big(const Potential& pot, cd mu, double x);

// Strip-regime functionals:
//   alpha0(x,mu) = sum_j ( |int_0^x e^{-2i mu t} sigma_j| + |int_0^x e^{+2i mu t} sigma_j| )
//   alpha_q(mu)  = same combination of L^q norms of those four profiles
//   alpha~(mu)   = integral_0^1 max(|sigma1|,|sigma2|)(s) * alpha0(s,mu)^2 ds
struct AlphaFunctionals {
    double alpha_q = 0.0;
    double alpha_tilde = 0.0;
};
double alpha0(const Potential& pot, cd mu, double x);
AlphaFunctionals alpha_functionals(const Potential& pot, cd mu, double q);

// k_P = integral_0^1 ||P(t)|| (gamma_{0,1}(t) + gamma_{0,2}(t)) dt  (spectral norm)
// rho(mu) = |mu|^{-1} k_P + gamma1^2 + gamma2^2 + gamma~ + |mu|^{-2}
double k_P(const Potential& pot, cd mu);
double rho_remainder(const Potential& pot, cd mu);

// Everything a sweep needs at one spectral point, profile-level.
struct RemainderReport {
    SpectralPoint point;
    GridFunction gamma01_profile;
    GridFunction gamma02_profile;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma_tilde = 0.0;
    std::map<std::string, double> measured_errors;
    std::map<std::string, double> ratios;
};

} // namespace dirac
