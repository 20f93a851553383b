#include <doctest.h>

#include <cmath>
#include <fstream>

#include "dirac/errors.hpp"
#include "dirac/piecewise.hpp"
#include "helpers.hpp"

using dirac::cd;
using dirac::PiecewisePoly;
using testutil::close;

TEST_CASE("constant and single-cell evaluation") {
    auto c = PiecewisePoly::constant(cd(2.0, -1.0));
    CHECK(close(c.eval(0.0), cd(2.0, -1.0)));
    CHECK(close(c.eval(0.73), cd(2.0, -1.0)));
    CHECK(close(c.eval(1.0), cd(2.0, -1.0)));

    // 1 - 2x + 0.5x^3 at x = 0.6: 1 - 1.2 + 0.108 = -0.092
    auto s = PiecewisePoly::single({1.0, -2.0, 0.0, 0.5});
    CHECK(close(s.eval(0.6), cd(-0.092, 0.0)));
    CHECK(s.max_degree() == 3);
    CHECK_FALSE(s.is_zero());
    CHECK(PiecewisePoly::constant(0.0).is_zero());
}

TEST_CASE("cell lookup is right-continuous, x=1 in last cell") {
    PiecewisePoly f({0.0, 0.4, 1.0}, {{cd(1.0)}, {cd(5.0)}});
    CHECK(f.cell_index(0.0) == 0);
    CHECK(f.cell_index(0.4) == 1);      // breakpoint belongs to the right cell
    CHECK(f.cell_index(0.39999) == 0);
    CHECK(f.cell_index(1.0) == 1);
    CHECK(close(f.eval(0.4), cd(5.0, 0.0)));
}

TEST_CASE("ctor validation") {
    CHECK_THROWS_AS(PiecewisePoly({0.0, 1.0}, {}), dirac::InvalidArgument);
    CHECK_THROWS_AS(PiecewisePoly({0.1, 1.0}, {{cd(1.0)}}), dirac::InvalidArgument);
    CHECK_THROWS_AS(PiecewisePoly({0.0, 0.9}, {{cd(1.0)}}), dirac::InvalidArgument);
    CHECK_THROWS_AS(PiecewisePoly({0.0, 0.5, 0.5, 1.0}, {{cd(1.0)}, {cd(1.0)}, {cd(1.0)}}),
                    dirac::InvalidArgument);
    // degree above the cap
    CHECK_THROWS_AS(PiecewisePoly({0.0, 1.0}, {{1.0, 1.0, 1.0, 1.0, 1.0}}),
                    dirac::InvalidArgument);
}

TEST_CASE("derivative and scaling") {
    auto s = PiecewisePoly::single({1.0, -2.0, 0.0, 0.5});
    auto d = s.derivative();
    // duds: -2 + 1.5x^2 at x = 0.8: -2 + 0.96 = -1.04
    CHECK(close(d.eval(0.8), cd(-1.04, 0.0)));
    auto sc = s.scaled(cd(0.0, 2.0));
    CHECK(close(sc.eval(0.6), cd(0.0, 2.0) * cd(-0.092, 0.0)));
}

TEST_CASE("product, exact when degrees stay within the cap") {
    auto a = PiecewisePoly::single({1.0, 2.0});       // 1 + 2x
    auto b = PiecewisePoly::single({0.0, 0.0, 3.0});  // 3x^2
    auto ab = a.product(b);
    for (double x : {0.0, 0.3, 0.77, 1.0})
        CHECK(close(ab.eval(x), (1.0 + 2.0 * x) * 3.0 * x * x));
}

TEST_CASE("product above the cap re-projects on a refined mesh") {
    auto c = PiecewisePoly::single({0.0, 0.0, 0.0, 1.0});  // x^3
    auto cc = c.product(c);                                // x^6, degree 6 -> cubic pieces
    CHECK(cc.max_degree() <= 3);
    CHECK(cc.cell_count() == 8);
    double worst = 0.0;
    for (int k = 0; k <= 200; ++k) {
        double x = k / 200.0;
        worst = std::max(worst, std::abs(cc.eval(x) - std::pow(x, 6)));
    }
    CHECK(worst < 2e-4);
    // cell endpoints interpolate exactly
    CHECK(close(cc.eval(1.0), cd(1.0, 0.0), 1e-13));
    CHECK(close(cc.eval(0.5), cd(std::pow(0.5, 6), 0.0), 1e-13));
}

TEST_CASE("lp norms of simple functions") {
    auto x = PiecewisePoly::single({0.0, 1.0});
    CHECK(close(dirac::lp_norm(x, 1.0), 0.5, 1e-13));
    CHECK(close(dirac::lp_norm(x, 2.0), 0.57735026918962576, 1e-13));  // 1/sqrt(3)
    CHECK(close(dirac::lp_norm(x, std::numeric_limits<double>::infinity()), 1.0, 1e-12));
    // non-integer exponent: ||x||_{1.5} = (int x^1.5)^{2/3} = 0.4^{2/3}
    CHECK(close(dirac::lp_norm(x, 1.5), std::pow(0.4, 2.0 / 3.0), 1e-8));
    auto c = PiecewisePoly::constant(cd(0.0, -2.0));
    CHECK(close(dirac::lp_norm(c, 1.0), 2.0, 1e-13));
    CHECK(close(dirac::lp_norm(c, 1.7), 2.0, 1e-12));
}

TEST_CASE("lp norm against independent quadrature on a two-cell sample") {
    auto f = testutil::sample_poly();
    double p = 1.5;
    cd direct = testutil::quad_mesh(
        [&](double t) { return cd(std::pow(std::abs(f.eval(t)), p), 0.0); }, 0.0, 1.0, f.mesh(),
        256);
    CHECK(close(dirac::lp_norm(f, p), std::pow(direct.real(), 1.0 / p), 1e-10));
}

TEST_CASE("perturbation spectral norm") {
    dirac::PerturbationMatrix P;
    P.p11 = PiecewisePoly::constant(3.0);
    P.p12 = PiecewisePoly::constant(0.0);
    P.p21 = PiecewisePoly::constant(0.0);
    P.p22 = PiecewisePoly::constant(4.0);
    CHECK(close(P.spectral_norm_at(0.2), 4.0, 1e-13));

    dirac::PerturbationMatrix N;
    N.p11 = PiecewisePoly::constant(0.0);
    N.p12 = PiecewisePoly::constant(1.0);
    N.p21 = PiecewisePoly::constant(0.0);
    N.p22 = PiecewisePoly::constant(0.0);
    CHECK(close(N.spectral_norm_at(0.9), 1.0, 1e-13));

    dirac::PerturbationMatrix O;
    O.p11 = PiecewisePoly::constant(1.0);
    O.p12 = PiecewisePoly::constant(1.0);
    O.p21 = PiecewisePoly::constant(1.0);
    O.p22 = PiecewisePoly::constant(1.0);
    CHECK(close(O.spectral_norm_at(0.5), 2.0, 1e-13));
}

TEST_CASE("potential construction and conjugate exponent") {
    auto pot = dirac::Potential::constant(cd(1.0, 0.0), cd(0.0, 1.0), 1.5);
    CHECK(pot.conjugate_exponent() == doctest::Approx(3.0));
    pot.p_exponent = 2.0;
    CHECK(pot.conjugate_exponent() == doctest::Approx(2.0));
    pot.p_exponent = 1.0;
    CHECK(std::isinf(pot.conjugate_exponent()));

    CHECK_THROWS_AS(dirac::Potential(PiecewisePoly::constant(1.0),
                                     PiecewisePoly::constant(1.0), 2.5),
                    dirac::InvalidArgument);
    // mismatched meshes are rejected
    PiecewisePoly a({0.0, 0.5, 1.0}, {{cd(1.0)}, {cd(1.0)}});
    CHECK_THROWS_AS(dirac::Potential(a, PiecewisePoly::constant(1.0), 1.5),
                    dirac::InvalidArgument);
}

TEST_CASE("envelope norm dominates both components") {
    // sigma1 = 1, sigma2 = 2x; kink of the envelope at x = 0.5 sits on a
    // quadrature panel edge, so the L1 value is exact:
    // int_0^.5 1 + int_.5^1 2x = 0.5 + 0.75
    auto pot = dirac::Potential(PiecewisePoly::constant(1.0),
                                PiecewisePoly::single({0.0, 2.0}), 1.0);
    CHECK(close(dirac::sigma_max_norm(pot, 1.0), 1.25, 1e-12));
    double n2 = dirac::sigma_max_norm(pot, 2.0);
    CHECK(n2 >= dirac::lp_norm(pot.sigma1, 2.0) - 1e-12);
    CHECK(n2 >= dirac::lp_norm(pot.sigma2, 2.0) - 1e-12);
}

TEST_CASE("json parsing round trip") {
    const char* text = R"({
      "mesh": [0.0, 0.25, 1.0],
      "sigma1": [[[1.0, 0.5], [-2.0, 0.0]], [[0.3, -0.1]]],
      "sigma2": [[[0.0, 0.0]], [[1.0, 0.0], [0.0, 2.0]]],
      "p": 1.5
    })";
    auto pot = dirac::parse_potential(text);
    CHECK(pot.mesh().size() == 3);
    CHECK(pot.p_exponent == doctest::Approx(1.5));
    CHECK(close(pot.sigma1.eval(0.1), cd(1.0, 0.5) + 0.1 * cd(-2.0, 0.0)));
    CHECK(close(pot.sigma2.eval(0.5), cd(1.0, 0.0) + 0.25 * cd(0.0, 2.0)));
    CHECK_FALSE(pot.P.has_value());

    // plain numbers work as real coefficients
    auto pot2 = dirac::parse_potential(
        R"({"mesh":[0.0,1.0],"sigma1":[[2.0]],"sigma2":[[0.0,1.0]]})");
    CHECK(close(pot2.sigma1.eval(0.9), cd(2.0, 0.0)));
    CHECK(close(pot2.sigma2.eval(0.5), cd(0.5, 0.0)));
    CHECK(pot2.p_exponent == doctest::Approx(1.5));  // default
}

TEST_CASE("json parsing with perturbation block") {
    const char* text = R"({
      "mesh": [0.0, 1.0],
      "sigma1": [[0.0]],
      "sigma2": [[0.0]],
      "P": {"p11": [[1.0]], "p12": [[0.0]], "p21": [[0.0, 1.0]], "p22": [[0.0]]}
    })";
    auto pot = dirac::parse_potential(text);
    REQUIRE(pot.P.has_value());
    CHECK(close(pot.P->p21.eval(0.5), cd(0.5, 0.0)));
    CHECK(close(pot.P->spectral_norm_at(1.0), 1.4142135623730951, 1e-12));
}

TEST_CASE("json parse errors") {
    CHECK_THROWS_AS(dirac::parse_potential("not json"), dirac::ParseError);
    CHECK_THROWS_AS(dirac::parse_potential("{}"), dirac::ParseError);
    CHECK_THROWS_AS(dirac::parse_potential(R"({"mesh":[0,1],"sigma1":[[0]]})"),
                    dirac::ParseError);
    // mesh must span [0,1]
    CHECK_THROWS_AS(
        dirac::parse_potential(R"({"mesh":[0,0.5],"sigma1":[[0]],"sigma2":[[0]]})"),
        dirac::ParseError);
    // degree cap enforced at parse time
    CHECK_THROWS_AS(
        dirac::parse_potential(
            R"({"mesh":[0,1],"sigma1":[[1,1,1,1,1]],"sigma2":[[0]]})"),
        dirac::ParseError);
    // exponent outside [1,2]
    CHECK_THROWS_AS(
        dirac::parse_potential(R"({"mesh":[0,1],"sigma1":[[0]],"sigma2":[[0]],"p":3})"),
        dirac::ParseError);
    CHECK_THROWS_AS(dirac::load_potential("/nonexistent/potential.json"),
                    dirac::IoError);
}
