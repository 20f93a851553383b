#include <cmath>
#include <cstdlib>
#include <limits>

#include "doctest.h"

#include "dirac/errors.hpp"
#include "dirac/sweep.hpp"
#include "helpers.hpp"

using namespace dirac;

namespace {
constexpr double kPi8 = 0.39269908169872414;
}

TEST_CASE("worker cap honors the environment variable") {
    setenv("DIRAC_ASYM_THREADS", "3", 1);
    CHECK(sweep_thread_count() == 3);
    setenv("DIRAC_ASYM_THREADS", "bogus", 1);
    CHECK(sweep_thread_count() >= 1);
    unsetenv("DIRAC_ASYM_THREADS");
    CHECK(sweep_thread_count() >= 1);
}

TEST_CASE("random potentials are deterministic, bounded, and well-formed") {
    const double inf = std::numeric_limits<double>::infinity();
    for (int kind : {0, 1})
        for (unsigned long long seed : {1ULL, 42ULL, 99ULL}) {
            const Potential a = random_potential(seed, kind);
            const Potential b = random_potential(seed, kind);
            CHECK(a.mesh() == b.mesh());
            for (double x : {0.1, 0.5, 0.9}) {
                CHECK(a.sigma1.eval(x) == b.sigma1.eval(x));
                CHECK(a.sigma2.eval(x) == b.sigma2.eval(x));
            }
            CHECK(a.mesh().size() >= 3);
            CHECK(a.mesh().size() <= 7);
            CHECK(lp_norm(a.sigma1, inf) <= 0.45 + 1e-12);
            CHECK(lp_norm(a.sigma2, inf) <= 0.45 + 1e-12);
            CHECK(a.sigma1.max_degree() <= kind);
            const Potential c = random_potential(seed + 1, kind);
            CHECK(a.sigma1.eval(0.3) != c.sigma1.eval(0.3));
        }
    CHECK_THROWS_AS(random_potential(1, 7), InvalidArgument);
}

TEST_CASE("zero potential sweeps to exact zeros with bounded verdicts") {
    const Potential pot = Potential::constant(0.0, 0.0);
    SweepPlan plan;
    plan.rays = {0.0, kPi8};
    plan.t0 = 20.0;
    plan.doublings = 2;
    plan.tiers = {Tier::T, Tier::S, Tier::R, Tier::Main1C, Tier::Main1S};
    plan.include_cor_ksq = true;
    const VerdictTable vt = run_sweep(pot, plan);
    CHECK(vt.all_bounded);
    CHECK(!vt.gate_limited);
    CHECK(vt.table.rows() == 3 * 2 * 6);
    const std::size_t ratio = vt.table.col_index("ratio");
    const std::size_t skipped = vt.table.col_index("skipped");
    const std::size_t verdict = vt.table.col_index("verdict");
    for (std::size_t i = 0; i < vt.table.rows(); ++i) {
        CHECK(vt.table.number(i, ratio) == 0.0);
        CHECK(vt.table.number(i, skipped) == 0.0);
        CHECK(vt.table.text(i, verdict) == "bounded");
    }
}

TEST_CASE("unit-coupling sweep is bounded, ordered, and bit-reproducible") {
    const Potential pot = Potential::constant(1.0, 1.0, 2.0);
    SweepPlan plan;
    plan.rays = {0.0, kPi8};
    plan.t0 = 20.0;
    plan.doublings = 2;
    plan.tiers = {Tier::T, Tier::S, Tier::R};
    const VerdictTable vt = run_sweep(pot, plan);
    CHECK(vt.all_bounded);

    // radius-then-ray merge order, tiers in plan order within a point
    const Table& t = vt.table;
    const std::size_t ray = t.col_index("ray"), radius = t.col_index("radius");
    const std::size_t tier = t.col_index("tier");
    CHECK(t.rows() == 3 * 2 * 3);
    CHECK(t.number(0, radius) == 20.0);
    CHECK(t.number(0, ray) == 0.0);
    CHECK(t.text(0, tier) == "T");
    CHECK(t.text(2, tier) == "R");
    CHECK(t.number(3, ray) == kPi8);
    CHECK(t.number(6, radius) == 40.0);

    // every numeric cell is finite
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.columns().size(); ++j)
            if (j != tier && j != t.col_index("verdict"))
                CHECK(std::isfinite(t.number(i, j)));

    const VerdictTable again = run_sweep(pot, plan);
    CHECK(again.table == vt.table);
    CHECK(again.table.to_csv() == vt.table.to_csv());
    CHECK(Table::from_csv(vt.table.to_csv()) == vt.table);
    CHECK(Table::from_jsonl(vt.table.to_jsonl()) == vt.table);
}

TEST_CASE("gate violations skip early points without failing the series") {
    const Potential pot = Potential::constant(2.0, 2.0, 2.0);
    SweepPlan plan;
    plan.rays = {0.0};
    plan.t0 = 20.0;
    plan.doublings = 4;
    plan.tiers = {Tier::T};
    plan.config.allow_fallback = false;
    const VerdictTable vt = run_sweep(pot, plan);
    CHECK(vt.gate_limited);
    const Table& t = vt.table;
    const std::size_t skipped = t.col_index("skipped");
    const std::size_t verdict = t.col_index("verdict");
    const std::size_t gate_ok = t.col_index("gate_ok");
    int n_skipped = 0, n_usable = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (t.number(i, skipped) == 1.0) {
            ++n_skipped;
            CHECK(t.number(i, gate_ok) == 0.0);
            CHECK(t.number(i, t.col_index("ratio")) == 0.0);
        } else {
            ++n_usable;
        }
    }
    CHECK(n_skipped >= 1);
    CHECK(n_usable >= 2);
    CHECK(t.text(0, verdict) != "inconclusive");
}

TEST_CASE("perturbed tiers sweep through the same harness") {
    const PiecewisePoly c1 = PiecewisePoly::constant(cd(0.5, 0.0));
    const PiecewisePoly c2 = PiecewisePoly::constant(cd(-0.3, 0.2));
    const PiecewisePoly q11 = PiecewisePoly::single({cd(0.4, 0.1), cd(-0.2, 0.0)});
    const Potential pot(c1, c2, 2.0, PerturbationMatrix{q11, c2, c1, q11});
    SweepPlan plan;
    plan.rays = {0.3};
    plan.t0 = 50.0;
    plan.doublings = 2;
    plan.tiers = {Tier::C73W, Tier::C73V};
    const VerdictTable vt = run_sweep(pot, plan);
    CHECK(vt.all_bounded);
    for (std::size_t i = 0; i < vt.table.rows(); ++i)
        CHECK(vt.table.number(i, vt.table.col_index("ratio")) < 5.0);
}

TEST_CASE("identity suite table passes and round-trips on a random corpus point") {
    const Potential pot = random_potential(7, 0);
    const Table t =
        run_identity_suite(pot, {cd(3.0, 0.0), cd(5.0, 2.0)}, {0.0, 0.3, 0.7, 1.0});
    CHECK(t.rows() == 2 * 4 * 14);
    CHECK(identity_table_all_pass(t));
    CHECK(Table::from_csv(t.to_csv()) == t);
    CHECK(Table::from_jsonl(t.to_jsonl()) == t);
}

TEST_CASE("sweep plans are validated up front") {
    const Potential pot = Potential::constant(1.0, 1.0);
    SweepPlan plan;
    plan.rays = {};
    CHECK_THROWS_AS(run_sweep(pot, plan), InvalidArgument);
    plan.rays = {0.0};
    plan.tiers = {Tier::SL};
    CHECK_THROWS_AS(run_sweep(pot, plan), InvalidArgument);
    plan.tiers = {Tier::C73W};
    CHECK_THROWS_AS(run_sweep(pot, plan), InvalidArgument);
    plan.tiers = {Tier::T};
    plan.t0 = -5.0;
    CHECK_THROWS_AS(run_sweep(pot, plan), InvalidArgument);
    plan.t0 = 20.0;
    plan.rays = {-0.3};
    CHECK_THROWS_AS(run_sweep(pot, plan), InvalidArgument); // leaves Im mu > -r
    plan.tiers = {};
    plan.rays = {0.0};
    CHECK_THROWS_AS(run_sweep(pot, plan), InvalidArgument);
}
