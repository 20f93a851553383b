#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "dirac/piecewise.hpp"

namespace testutil {

using cd = std::complex<double>;

// Relative-ish comparison: tolerance scales with the larger magnitude once
// values exceed 1.
inline bool close(cd a, cd b, double tol = 1e-12) {
    double scale = std::max(1.0, std::max(std::abs(a), std::abs(b)));
    return std::abs(a - b) <= tol * scale;
}

inline bool close(double a, double b, double tol = 1e-12) {
    return close(cd(a, 0.0), cd(b, 0.0), tol);
}

// Composite 12-point Gauss-Legendre quadrature, used as an independent check
// against the moment/series machinery in the library.
inline cd quad(const std::function<cd(double)>& f, double a, double b, int panels = 64) {
    static const double gx[12] = {
        -0.98156063424671925, -0.90411725637047486, -0.76990267419430469,
        -0.58731795428661745, -0.36783149899818019, -0.12523340851146892,
        0.12523340851146892,  0.36783149899818019,  0.58731795428661745,
        0.76990267419430469,  0.90411725637047486,  0.98156063424671925};
    static const double gw[12] = {
        0.047175336386511827, 0.10693932599531843, 0.16007832854334623,
        0.20316742672306592,  0.23349253653835481, 0.24914704581340279,
        0.24914704581340279,  0.23349253653835481,  0.20316742672306592,
        0.16007832854334623,  0.10693932599531843,  0.047175336386511827};
    cd total = 0.0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        for (int j = 0; j < 12; ++j) total += 0.5 * h * gw[j] * f(mid + 0.5 * h * gx[j]);
    }
    return total;
}

// Same, split at interior breakpoints so panels never straddle a jump of a
// piecewise integrand.
inline cd quad_mesh(const std::function<cd(double)>& f, double a, double b,
                    const std::vector<double>& breaks, int panels = 64) {
    cd total = 0.0;
    double lo = a;
    for (double br : breaks)
        if (br > a && br < b) {
            total += quad(f, lo, br, panels);
            lo = br;
        }
    return total + quad(f, lo, b, panels);
}

// Two-cell piecewise polynomial with hand-picked complex coefficients; enough
// structure to exercise cell traversal without being a special case.
inline dirac::PiecewisePoly sample_poly() {
    return dirac::PiecewisePoly({0.0, 0.4, 1.0},
                                {{cd(1.0, 0.5), cd(-2.0, 0.0), cd(0.0, 0.0), cd(0.5, -0.25)},
                                 {cd(-0.7, 0.1), cd(0.3, 0.0)}});
}

}  // namespace testutil
