#include <cmath>
#include <set>
#include <string>

#include "doctest.h"

#include "dirac/errors.hpp"
#include "dirac/identities.hpp"
#include "helpers.hpp"

using namespace dirac;
using testutil::close;

namespace {

Potential asym_potential() {
    PiecewisePoly s1 = testutil::sample_poly();
    PiecewisePoly s2({0.0, 0.4, 1.0}, {{cd(0.2, -0.3), cd(0.5, 0.1)},
                                       {cd(-0.4, 0.2), cd(0.0, 0.0), cd(0.3, 0.0)}});
    return Potential(std::move(s1), std::move(s2), 1.5);
}

} // namespace

TEST_CASE("identity names are unique and nonempty") {
    const std::vector<IdentityId> ids = all_identities();
    CHECK(ids.size() == 14);
    std::set<std::string> names;
    for (IdentityId id : ids) {
        const std::string n = identity_name(id);
        CHECK(!n.empty());
        names.insert(n);
    }
    CHECK(names.size() == ids.size());
}

TEST_CASE("the full identity table passes across strip frequencies") {
    const Potential pot = asym_potential();
    for (cd mu : {cd(4.0, 0.8), cd(7.0, -0.6), cd(12.0, 2.5)})
        for (double x : {0.3, 0.72})
            for (IdentityId id : all_identities()) {
                const IdentityResult res = identity_eval(pot, id, mu, x, 1e-8, 3.0);
                CAPTURE(identity_name(id));
                CAPTURE(mu);
                CAPTURE(x);
                CHECK(res.pass);
                CHECK(res.applicable);
                if (!res.is_bound) CHECK(res.rel_residual <= 1e-8);
            }
}

TEST_CASE("single-power truncation defects saturate their budgets") {
    // the dropped part is rank-one, so the measured defect equals the budget
    const Potential pot = asym_potential();
    const cd mu(6.0, 1.0);
    const IdentityResult r1 = identity_eval(pot, IdentityId::K1Truncation, mu, 0.45);
    CHECK(r1.pass);
    CHECK(close(r1.lhs.real(), r1.rhs.real(), 1e-9));
    const IdentityResult r2 = identity_eval(pot, IdentityId::K2Truncation, mu, 0.45);
    CHECK(r2.pass);
    CHECK(close(r2.lhs.real(), r2.rhs.real(), 1e-9));
}

TEST_CASE("the quadruple bound reports non-applicability outside the strip") {
    const Potential pot = asym_potential();
    const IdentityResult out =
        identity_eval(pot, IdentityId::QuadrupleStripBound, cd(5.0, 3.0), 0.5, 1e-8, 1.0);
    CHECK(!out.applicable);
    CHECK(out.pass);
    const IdentityResult in =
        identity_eval(pot, IdentityId::QuadrupleStripBound, cd(5.0, 0.5), 0.5, 1e-8, 1.0);
    CHECK(in.applicable);
    CHECK(in.pass);
    CHECK(in.lhs.real() > 0.0);
}

TEST_CASE("window identity sides agree with nested quadrature") {
    const Potential pot = asym_potential();
    const double mu = 4.5, x = 0.8;
    const IdentityResult res =
        identity_eval(pot, IdentityId::K2ForwardWindow, cd(mu, 0.0), x);
    const cd tim(0.0, 2.0 * mu);
    auto inner = [&](double t) {
        return testutil::quad_mesh(
            [&](double s) { return pot.sigma1.eval(s) * std::exp(-tim * s); }, 0.0, t,
            pot.mesh(), 24);
    };
    const cd brute = testutil::quad_mesh(
        [&](double t) { return pot.sigma2.eval(t) * std::exp(tim * t) * inner(t); }, 0.0,
        x, pot.mesh(), 24);
    CHECK(close(res.rhs, brute, 1e-8));
    CHECK(close(res.lhs, brute, 1e-8));
}

TEST_CASE("zero couplings satisfy every identity with zero residual") {
    const Potential pot = Potential::constant(0.0, 0.0);
    for (IdentityId id : all_identities()) {
        const IdentityResult res = identity_eval(pot, id, cd(6.0, 0.5), 0.6);
        CAPTURE(identity_name(id));
        CHECK(res.pass);
        CHECK(res.residual <= 1e-13);
    }
}
