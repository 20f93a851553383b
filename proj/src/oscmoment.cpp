#include "dirac/oscmoment.hpp"

#include <cmath>

#include "dirac/errors.hpp"

namespace dirac {
namespace {

// |lambda| boundary between the Taylor regime and the explicit-antiderivative
// recursion.  The in-parts recurrence amplifies roundoff by k/|lambda| per
// step, so it is only used where that ratio stays below one; the series keeps
// its largest term at e^{|Re lambda|} which is harmless below the switch.
constexpr double kSeriesSwitch = 12.0;

} // namespace

void osc_monomial_moments(cd lambda, int kmax, std::span<cd> out, cd shift) {
    if (kmax < 0 || out.size() < static_cast<std::size_t>(kmax) + 1)
        throw InvalidArgument("moment output span too small");
    const double al = std::abs(lambda);
    if (al >= std::max(kSeriesSwitch, static_cast<double>(kmax) + 2.0)) {
        // shift folded into the endpoint values: e^{shift +- lambda} stays
        // representable whenever the anchored weight it encodes is bounded
        const cd ep = std::exp(shift + lambda), em = std::exp(shift - lambda);
        const cd inv = 1.0 / lambda;
        cd prev = (ep - em) * inv;
        out[0] = prev;
        double sgn = -1.0; // (-1)^k
        for (int k = 1; k <= kmax; ++k) {
            prev = ((ep - sgn * em) - static_cast<double>(k) * prev) * inv;
            out[k] = prev;
            sgn = -sgn;
        }
        return;
    }
    const cd pre = std::exp(shift);
    // m_k = 2 sum_{n+k even} lambda^n / (n! (n+k+1))
    for (int k = 0; k <= kmax; ++k) {
        cd term(1.0, 0.0); // lambda^n / n!
        cd acc(0.0, 0.0);
        for (int n = 0; n < 90; ++n) {
            if (((n + k) & 1) == 0) acc += term / static_cast<double>(n + k + 1);
            term *= lambda / static_cast<double>(n + 1);
            if (std::abs(term) < 1e-20 && n > al) break;
        }
        out[k] = pre * 2.0 * acc;
    }
}

cd osc_cell_moment(const Cell& cell, cd mu, int sign, double anchor) {
    const double c = 0.5 * (cell.a + cell.b);
    const double h = 0.5 * (cell.b - cell.a);
    if (!(h > 0.0)) return cd(0.0, 0.0);
    if (cell.coeffs.empty()) return cd(0.0, 0.0);
    const cd two_imu = cd(0.0, 2.0 * sign) * mu;
    const cd lambda = two_imu * h;

    // re-center: t - a = h (xi + 1), so p(t) = sum_k p_k h^k (xi+1)^k
    const int deg = static_cast<int>(cell.coeffs.size()) - 1;
    std::vector<cd> q(deg + 1, cd(0.0, 0.0));
    double hk = 1.0;
    for (int k = 0; k <= deg; ++k) {
        const cd pk = cell.coeffs[k] * hk;
        double binom = 1.0; // C(k, j)
        for (int j = 0; j <= k; ++j) {
            q[j] += pk * binom;
            binom = binom * (k - j) / (j + 1);
        }
        hk *= h;
    }
    std::vector<cd> m(deg + 1);
    osc_monomial_moments(lambda, deg, m, two_imu * (c - anchor));
    cd acc(0.0, 0.0);
    for (int k = deg; k >= 0; --k) acc += q[k] * m[k];
    return h * acc;
}

void osc_cumulative_series(cd lambda, std::span<const cd> p, std::vector<cd>& series_out) {
    if (std::abs(lambda) > 14.0)
        throw InvalidArgument("cumulative series requested outside the series regime");
    const int np = static_cast<int>(p.size());
    if (np == 0) {
        series_out.assign(1, cd(0.0, 0.0));
        return;
    }
    // e^{-lambda s} expansion terms (-lambda)^j / j!, adaptively truncated
    const double al = std::abs(lambda);
    std::vector<cd> ex;
    ex.reserve(32);
    cd t(1.0, 0.0);
    for (int j = 0; j < 72; ++j) {
        ex.push_back(t);
        t *= -lambda / static_cast<double>(j + 1);
        if (std::abs(t) < 1e-20 && j > al) break;
    }
    const int nc = np + static_cast<int>(ex.size()) - 1;
    // c_m = sum_k p_k (-lambda)^{m-k} / (m-k)!
    std::vector<cd> cm(nc + 1, cd(0.0, 0.0));
    for (int k = 0; k < np; ++k) {
        if (p[k] == cd(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < ex.size(); ++j) cm[k + j] += p[k] * ex[j];
    }
    // Q(xi) = sum_m c_m (xi^{m+1} - (-1)^{m+1}) / (m+1)
    series_out.assign(nc + 2, cd(0.0, 0.0));
    double sgn = 1.0; // (-1)^m
    for (int m = 0; m <= nc; ++m) {
        series_out[m + 1] = cm[m] / static_cast<double>(m + 1);
        series_out[0] += cm[m] * (sgn / (m + 1));
        sgn = -sgn;
    }
}

cd eval_series(std::span<const cd> c, double xi) {
    cd acc(0.0, 0.0);
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * xi + c[k];
    return acc;
}

} // namespace dirac
