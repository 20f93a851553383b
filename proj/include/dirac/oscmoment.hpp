#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dirac {

using cd = std::complex<double>;

// One polynomial cell [a,b] with coefficients low-to-high in (t - a).
struct Cell {
    double a = 0.0;
    double b = 1.0;
    std::vector<cd> coeffs;
};

// Closed-form oscillatory moment
//     integral_a^b exp(sign * 2i*mu * (t - anchor)) * poly(t) dt.
// Exact for polynomial cells: adaptive Taylor series around the cell center
// when |2 mu| * halfwidth < 12, explicit antiderivative recursion above.
// The anchor offset is folded into the endpoint exponentials so that a
// decaying anchored weight never round-trips through exp overflow; results
// still grow like exp(2|Im mu| * dist) when the anchor sits on the growing
// side.
cd osc_cell_moment(const Cell& cell, cd mu, int sign, double anchor);

// Local primitives shared by the grid engine (lambda = scaled exponent on
// the reference interval [-1,1]).

// m_k(lambda) = e^{shift} * integral_{-1}^{1} e^{lambda*xi} xi^k d xi,
// k = 0..kmax, with the constant prefactor applied inside the endpoint
// exponentials (stable when shift +- lambda both have nonpositive real part).
void osc_monomial_moments(cd lambda, int kmax, std::span<cd> out,
                          cd shift = cd(0.0, 0.0));

// Incomplete forward antiderivative: given coefficients p (low-to-high) on
// [-1,1], returns the power series Q with
//     Q(xi) = integral_{-1}^{xi} e^{-lambda*s} p(s) ds
// so that integral_{-1}^{xi} e^{lambda*(xi-s)} p(s) ds = e^{lambda*xi} Q(xi).
// Requires |lambda| <= ~12 (series regime); used only on refined subcells.
void osc_cumulative_series(cd lambda, std::span<const cd> p, std::vector<cd>& series_out);

// Evaluate a power series sum c_n xi^n at xi (Horner).
cd eval_series(std::span<const cd> c, double xi);

} // namespace dirac
