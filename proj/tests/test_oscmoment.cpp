#include <doctest.h>

#include <cmath>
#include <vector>

#include "dirac/errors.hpp"
#include "dirac/oscmoment.hpp"
#include "helpers.hpp"

using dirac::cd;
using testutil::close;

TEST_CASE("reference moments at lambda = 0") {
    std::vector<cd> m(4);
    dirac::osc_monomial_moments(cd(0.0, 0.0), 3, m);
    CHECK(close(m[0], cd(2.0, 0.0)));
    CHECK(close(m[1], cd(0.0, 0.0)));
    CHECK(close(m[2], cd(2.0 / 3.0, 0.0)));
    CHECK(close(m[3], cd(0.0, 0.0)));
}

TEST_CASE("moments in the series regime match independent values") {
    // int_{-1}^{1} e^{(2+3i)s} s^3 ds, high-precision external value
    std::vector<cd> m(4);
    dirac::osc_monomial_moments(cd(2.0, 3.0), 3, m);
    CHECK(close(m[3], cd(-0.96515295217566705, 0.70311358196806811), 1e-14));
    // m0 closed form 2 sinh(lambda)/lambda
    cd lam(2.0, 3.0);
    CHECK(close(m[0], (std::exp(lam) - std::exp(-lam)) / lam, 1e-14));
}

TEST_CASE("moments in the recurrence regime match independent values") {
    std::vector<cd> m(4);
    dirac::osc_monomial_moments(cd(13.0, 0.0), 3, m);
    CHECK(close(m[3], cd(27293.596047968199, 0.0), 1e-13));
    cd lam(13.0, 0.0);
    CHECK(close(m[0], (std::exp(lam) - std::exp(-lam)) / lam, 1e-13));
}

TEST_CASE("cell moment closed forms, constant integrand") {
    dirac::Cell cell{0.0, 1.0, {cd(1.0, 0.0)}};
    // mu = i, sign +1, anchor 1: int_0^1 e^{-2(t-1)} dt = (e^2 - 1)/2
    CHECK(close(dirac::osc_cell_moment(cell, cd(0.0, 1.0), +1, 1.0),
                cd(3.1945280494653251, 0.0), 1e-14));
    // anchor 0: int_0^1 e^{-2t} dt = (1 - e^{-2})/2
    CHECK(close(dirac::osc_cell_moment(cell, cd(0.0, 1.0), +1, 0.0),
                cd(0.43233235838169365, 0.0), 1e-14));
    // full period of e^{2*pi*i*t}: zero
    CHECK(std::abs(dirac::osc_cell_moment(cell, cd(M_PI, 0.0), +1, 0.0)) < 1e-14);
}

TEST_CASE("cell moment vs independent quadrature, generic cell") {
    dirac::Cell cell{0.3, 0.9, {cd(1.0, 0.0), cd(-2.0, 0.4), cd(0.5, 0.0), cd(0.25, -1.0)}};
    cd mu(7.0, -0.3);
    double anchor = 0.55;
    for (int sign : {+1, -1}) {
        cd got = dirac::osc_cell_moment(cell, mu, sign, anchor);
        cd want = testutil::quad(
            [&](double t) {
                double u = t - cell.a;
                cd p = cell.coeffs[0] + u * (cell.coeffs[1] + u * (cell.coeffs[2] + u * cell.coeffs[3]));
                return std::exp(cd(0.0, 2.0 * sign) * mu * (t - anchor)) * p;
            },
            cell.a, cell.b, 128);
        CHECK(close(got, want, 1e-13));
    }
}

TEST_CASE("cell moment branch consistency across the series/recurrence switch") {
    // same physical integral computed in both regimes by scaling the cell
    for (double muval : {11.5, 12.5, 30.0}) {
        dirac::Cell cell{0.2, 0.8, {cd(0.7, -0.2), cd(1.0, 0.0), cd(0.0, 0.3)}};
        cd got = dirac::osc_cell_moment(cell, cd(muval, 0.4), -1, 0.0);
        cd want = testutil::quad(
            [&](double t) {
                double u = t - cell.a;
                cd p = cell.coeffs[0] + u * (cell.coeffs[1] + u * cell.coeffs[2]);
                return std::exp(cd(0.0, -2.0) * cd(muval, 0.4) * t) * p;
            },
            cell.a, cell.b, 256);
        CHECK(close(got, want, 1e-12));
    }
}

TEST_CASE("cumulative series reproduces the anchored integral") {
    std::vector<cd> p = {cd(0.3, 0.0), cd(1.2, -0.5), cd(-0.8, 0.2)};
    cd lam(1.3, -0.9);
    std::vector<cd> series;
    dirac::osc_cumulative_series(lam, p, series);
    for (double xi : {-0.7, 0.2, 1.0}) {
        cd got = std::exp(lam * xi) * dirac::eval_series(series, xi);
        cd want = testutil::quad(
            [&](double s) {
                cd ps = p[0] + s * (p[1] + s * p[2]);
                return std::exp(lam * (xi - s)) * ps;
            },
            -1.0, xi, 128);
        CHECK(close(got, want, 1e-13));
    }
}

TEST_CASE("cumulative series rejects exponents outside the series regime") {
    std::vector<cd> p = {cd(1.0, 0.0)};
    std::vector<cd> series;
    CHECK_THROWS_AS(dirac::osc_cumulative_series(cd(20.0, 0.0), p, series),
                    dirac::InvalidArgument);
}

TEST_CASE("series evaluation is plain Horner") {
    std::vector<cd> c = {cd(1.0, 0.0), cd(0.0, 1.0), cd(-2.0, 0.0)};
    CHECK(close(dirac::eval_series(c, 0.5), cd(1.0, 0.0) + cd(0.0, 0.5) + cd(-0.5, 0.0)));
}
