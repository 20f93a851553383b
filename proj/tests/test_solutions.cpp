#include <doctest.h>

#include <cmath>

#include "dirac/errors.hpp"
#include "dirac/solutions.hpp"
#include "helpers.hpp"

using dirac::cd;
using dirac::Potential;
using testutil::close;

namespace {

Potential sample_pot() {
    dirac::PiecewisePoly s1({0.0, 0.5, 1.0}, {{cd(0.6, 0.2)}, {cd(-0.4, 0.0), cd(0.5, 0.0)}});
    dirac::PiecewisePoly s2({0.0, 0.5, 1.0}, {{cd(0.0, 0.0), cd(0.8, 0.0)}, {cd(0.3, -0.3)}});
    return Potential(s1, s2, 2.0);
}

cd raw(const dirac::TwoPhaseComponent& comp, cd mu, double x) {
    return comp.plus.eval(x) * std::exp(cd(0.0, 1.0) * mu * x) +
           comp.minus.eval(x) * std::exp(cd(0.0, -1.0) * mu * x);
}

}  // namespace

TEST_CASE("zero potential gives free solutions") {
    auto pot = Potential::constant(cd(0.0), cd(0.0), 2.0);
    cd mu(3.0, 0.4);
    auto fs = dirac::cauchy_solutions(pot, mu);
    for (double x : {0.0, 0.5, 1.0}) {
        CHECK(close(fs.w.one.eval(x), cd(1.0, 0.0)));
        CHECK(close(fs.w.two.eval(x), cd(0.0, 0.0)));
        CHECK(close(fs.v.one.eval(x), cd(0.0, 0.0)));
        CHECK(close(fs.v.two.eval(x), cd(1.0, 0.0)));
        CHECK(close(fs.det_profile.eval(x), cd(1.0, 0.0)));
        // Cauchy columns reduce to pure phases
        CHECK(close(raw(fs.c1, mu, x), std::exp(cd(0.0, 1.0) * mu * x)));
        CHECK(close(raw(fs.s2, mu, x), std::exp(cd(0.0, -1.0) * mu * x)));
    }
    CHECK(close(fs.z2_at_0, cd(1.0, 0.0)));
}

TEST_CASE("one-sided coupling closed forms") {
    cd mu(4.0, 0.5), c(0.8, -0.2);
    // sigma2 = 0: the first family is exactly (1, 0)
    auto pot = Potential(dirac::PiecewisePoly::constant(c),
                         dirac::PiecewisePoly::constant(cd(0.0)), 2.0);
    auto w = dirac::fundamental_w(pot, mu);
    auto v = dirac::fundamental_v(pot, mu);
    for (double x : {0.0, 0.37, 1.0}) {
        CHECK(close(w.one.eval(x), cd(1.0, 0.0), 1e-12));
        CHECK(close(w.two.eval(x), cd(0.0, 0.0), 1e-12));
        // second-family profile: (-c (e^{2i mu x} - 1)/(2i mu), 1)
        cd tim = cd(0.0, 2.0) * mu;
        CHECK(close(v.one.eval(x), -c * (std::exp(tim * x) - 1.0) / tim, 1e-11));
        CHECK(close(v.two.eval(x), cd(1.0, 0.0), 1e-12));
    }
}

TEST_CASE("boundary data of the fundamental pair") {
    auto pot = sample_pot();
    cd mu(9.0, 0.7);
    auto fs = dirac::cauchy_solutions(pot, mu);
    CHECK(close(fs.w.one.eval(0.0), cd(1.0, 0.0), 1e-10));
    CHECK(close(fs.w.two.eval(1.0), cd(0.0, 0.0), 1e-10));
    CHECK(close(fs.v.one.eval(0.0), cd(0.0, 0.0), 1e-10));
    CHECK(close(fs.v.two.eval(1.0), cd(1.0, 0.0), 1e-10));
    CHECK_FALSE(fs.via_fallback);
    CHECK(fs.terms_w >= 2);
}

TEST_CASE("series and direct fixed-point paths agree") {
    auto pot = sample_pot();
    cd mu(9.0, 0.7);
    auto fs = dirac::cauchy_solutions(pot, mu);
    auto dw = dirac::solve_direct(pot, mu, cd(1.0), cd(0.0));
    auto dv = dirac::solve_direct(pot, mu, cd(0.0), cd(1.0));
    CHECK(dw.residual < 1e-10);
    for (double x : {0.0, 0.21, 0.5, 0.83, 1.0}) {
        CHECK(close(fs.w.one.eval(x), dw.w_part.one.eval(x), 1e-9));
        CHECK(close(fs.w.two.eval(x), dw.w_part.two.eval(x), 1e-9));
        CHECK(close(fs.v.one.eval(x), dv.v_part.one.eval(x), 1e-9));
        CHECK(close(fs.v.two.eval(x), dv.v_part.two.eval(x), 1e-9));
    }
}

TEST_CASE("Cauchy matrix is the identity at zero") {
    auto pot = sample_pot();
    cd mu(6.0, 1.2);
    auto fs = dirac::cauchy_solutions(pot, mu);
    CHECK(close(raw(fs.c1, mu, 0.0), cd(1.0, 0.0), 1e-10));
    CHECK(close(raw(fs.c2, mu, 0.0), cd(0.0, 0.0), 1e-10));
    CHECK(close(raw(fs.s1, mu, 0.0), cd(0.0, 0.0), 1e-10));
    CHECK(close(raw(fs.s2, mu, 0.0), cd(1.0, 0.0), 1e-10));
}

TEST_CASE("profile determinant is constant") {
    auto pot = sample_pot();
    cd mu(6.0, 1.2);
    auto fs = dirac::cauchy_solutions(pot, mu);
    for (double x : {0.1, 0.44, 0.9})
        CHECK(close(fs.det_profile.eval(x), fs.z2_at_0, 1e-9));
}

TEST_CASE("Cauchy columns solve the same boundary problems as the direct path") {
    auto pot = sample_pot();
    cd mu(3.0, 0.5);
    auto fs = dirac::cauchy_solutions(pot, mu);
    cd q = fs.w2_at_0 / fs.v2_at_0;
    // boundary data of the c column: first component 1 at x=0, second -q at x=1
    auto dcol = dirac::solve_direct(pot, mu, cd(1.0), -q);
    auto scol = dirac::solve_direct(pot, mu, cd(0.0), 1.0 / fs.v2_at_0);
    for (double x : {0.0, 0.35, 0.72, 1.0}) {
        CHECK(close(raw(fs.c1, mu, x), dcol.raw1(mu, x), 1e-9));
        CHECK(close(raw(fs.c2, mu, x), dcol.raw2(mu, x), 1e-9));
        CHECK(close(raw(fs.s1, mu, x), scol.raw1(mu, x), 1e-9));
        CHECK(close(raw(fs.s2, mu, x), scol.raw2(mu, x), 1e-9));
    }
}

TEST_CASE("direct solver reports its convergence") {
    auto pot = sample_pot();
    auto d = dirac::solve_direct(pot, cd(5.0, 0.0), cd(1.0), cd(0.5));
    CHECK(d.iterations >= 2);
    CHECK(d.residual < 1e-10);
    CHECK(close(d.raw1(cd(5.0, 0.0), 0.0), cd(1.0, 0.0), 1e-10));
}
