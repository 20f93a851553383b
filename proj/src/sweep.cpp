#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "dirac/errors.hpp"
#include "dirac/functionals.hpp"
#include "dirac/operators.hpp"
#include "dirac/sweep.hpp"

namespace dirac {

int sweep_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    int n = hw ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("DIRAC_ASYM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<int>(std::min(v, 256L));
    }
    return std::max(1, n);
}

namespace {

double fin(double v) { return std::isfinite(v) ? v : 1e250; }

struct TierOutcome {
    double sup = 0.0, rem = 0.0, ratio = 0.0;
    bool skipped = false;
};

struct PointOutcome {
    bool gate_ok = true;
    bool all_skipped = false;
    std::vector<TierOutcome> tiers;
    TierOutcome cor;
};

PointOutcome eval_point(const Potential& pot, const SweepPlan& plan, cd mu) {
    PointOutcome out;
    out.tiers.resize(plan.tiers.size());
    const GridPtr grid =
        CompositeGrid::build(pot.mesh(), mu, plan.config.min_subcells_per_cell);
    const double q = pot.conjugate_exponent();
    const SpectralPoint sp = make_spectral_point(pot, mu, plan.r);
    out.gate_ok = sp.a_const * gamma_lq(pot, mu, 1, q) <= 0.5 &&
                  sp.a_const * gamma_lq(pot, mu, 2, q) <= 0.5;

    FundamentalSet fs;
    try {
        fs = cauchy_solutions(pot, mu, plan.config.neumann_tol,
                              plan.config.allow_fallback, grid);
    } catch (const GateViolation&) {
        out.all_skipped = true;
    } catch (const DegenerateNormalizer&) {
        out.all_skipped = true;
    } catch (const NonConvergence&) {
        out.all_skipped = true;
    }
    if (out.all_skipped) {
        for (TierOutcome& t : out.tiers) t.skipped = true;
        out.cor.skipped = true;
        return out;
    }

    for (std::size_t i = 0; i < plan.tiers.size(); ++i) {
        TierOutcome& t = out.tiers[i];
        try {
            const TierErrors te = measure_tier(pot, mu, plan.r, plan.tiers[i], fs, grid);
            t.sup = fin(te.sup_error);
            t.rem = fin(te.remainder);
            t.ratio = fin(te.ratio);
        } catch (const GateViolation&) {
            t.skipped = true;
        } catch (const ContractionFailure&) {
            t.skipped = true;
        } catch (const NonConvergence&) {
            t.skipped = true;
        }
    }
    if (plan.include_cor_ksq) {
        const GridFunction e(grid, cd(1.0, 0.0));
        const double m = std::max(apply_K(pot, mu, 1, apply_K(pot, mu, 1, e)).sup_norm(),
                                  apply_K(pot, mu, 2, apply_K(pot, mu, 2, e)).sup_norm());
        const double gt = gamma_tilde(pot, mu);
        out.cor.sup = fin(m);
        out.cor.rem = fin(gt);
        out.cor.ratio = (m == 0.0) ? 0.0 : fin(m / std::max(gt, 1e-300));
    }
    return out;
}

std::string series_verdict(const std::vector<double>& ratios) {
    if (ratios.size() < 2) return "inconclusive";
    const double med = 0.5 * (ratios[0] + ratios[1]);
    const double worst = *std::max_element(ratios.begin(), ratios.end());
    return worst <= 10.0 * med ? "bounded" : "growing";
}

} // namespace

VerdictTable run_sweep(const Potential& pot, const SweepPlan& plan) {
    if (plan.rays.empty()) throw InvalidArgument("sweep plan needs at least one ray");
    if (plan.t0 <= 0.0 || plan.doublings < 0)
        throw InvalidArgument("sweep plan needs t0 > 0 and doublings >= 0");
    if (plan.tiers.empty() && !plan.include_cor_ksq)
        throw InvalidArgument("sweep plan selects no measurements");
    for (Tier t : plan.tiers) {
        if (t == Tier::SL)
            throw InvalidArgument("the second-order tier is swept through its own pathway");
        if ((t == Tier::C73W || t == Tier::C73V) && !pot.P)
            throw InvalidArgument("perturbed tiers require a perturbation block");
    }

    // Points in radius-then-ray order; results are merged in this order no
    // matter how the workers are scheduled.
    struct Point {
        double radius, ray;
        cd mu;
    };
    std::vector<Point> points;
    for (int k = 0; k <= plan.doublings; ++k) {
        const double t = plan.t0 * std::pow(2.0, k);
        for (double theta : plan.rays) {
            const cd mu = t * std::exp(cd(0.0, theta));
            if (mu.imag() < -plan.r)
                throw InvalidArgument("sweep point leaves the admissible half-plane");
            points.push_back({t, theta, mu});
        }
    }

    std::vector<PointOutcome> results(points.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();) {
            try {
                results[i] = eval_point(pot, plan, points[i].mu);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    const int nthreads =
        std::min<int>(sweep_thread_count(), static_cast<int>(points.size()));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) threads.emplace_back(worker);
        for (std::thread& th : threads) th.join();
    }
    if (error) std::rethrow_exception(error);

    // Verdict per (measurement, ray) over ascending radii.
    const std::size_t n_meas = plan.tiers.size() + (plan.include_cor_ksq ? 1 : 0);
    auto tier_label = [&](std::size_t m) {
        return m < plan.tiers.size() ? std::string(tier_name(plan.tiers[m]))
                                     : std::string("corKsq");
    };
    auto outcome_of = [&](const PointOutcome& po, std::size_t m) -> const TierOutcome& {
        return m < plan.tiers.size() ? po.tiers[m] : po.cor;
    };

    VerdictTable out;
    std::vector<std::string> verdicts(n_meas * plan.rays.size());
    bool all_bounded = true;
    for (std::size_t ri = 0; ri < plan.rays.size(); ++ri)
        for (std::size_t m = 0; m < n_meas; ++m) {
            std::vector<double> ratios;
            for (int k = 0; k <= plan.doublings; ++k) {
                const PointOutcome& po = results[k * plan.rays.size() + ri];
                const TierOutcome& t = outcome_of(po, m);
                if (t.skipped) {
                    if (ratios.empty()) out.gate_limited = true;
                    continue;
                }
                ratios.push_back(t.ratio);
            }
            const std::string v = series_verdict(ratios);
            verdicts[ri * n_meas + m] = v;
            all_bounded = all_bounded && v == "bounded";
        }
    out.all_bounded = all_bounded;

    Table table({"ray", "radius", "tier", "sup_error", "remainder", "ratio", "gate_ok",
                 "skipped", "verdict"});
    for (std::size_t p = 0; p < points.size(); ++p) {
        const std::size_t ri = p % plan.rays.size();
        for (std::size_t m = 0; m < n_meas; ++m) {
            const TierOutcome& t = outcome_of(results[p], m);
            table.add_row({points[p].ray, points[p].radius, tier_label(m),
                           t.skipped ? 0.0 : t.sup, t.skipped ? 0.0 : t.rem,
                           t.skipped ? 0.0 : t.ratio, results[p].gate_ok ? 1.0 : 0.0,
                           t.skipped ? 1.0 : 0.0, verdicts[ri * n_meas + m]});
        }
    }
    out.table = std::move(table);
    return out;
}

Table run_identity_suite(const Potential& pot, const std::vector<cd>& mu_samples,
                         const std::vector<double>& x_samples, double exact_tol,
                         double d) {
    Table table({"identity", "mu_re", "mu_im", "x", "lhs_re", "lhs_im", "rhs_re",
                 "rhs_im", "residual", "rel_residual", "is_bound", "applicable", "pass"});
    for (cd mu : mu_samples)
        for (double x : x_samples)
            for (IdentityId id : all_identities()) {
                const IdentityResult r = identity_eval(pot, id, mu, x, exact_tol, d);
                table.add_row({std::string(identity_name(id)), mu.real(), mu.imag(), x,
                               fin(r.lhs.real()), fin(r.lhs.imag()), fin(r.rhs.real()),
                               fin(r.rhs.imag()), fin(r.residual), fin(r.rel_residual),
                               r.is_bound ? 1.0 : 0.0, r.applicable ? 1.0 : 0.0,
                               r.pass ? 1.0 : 0.0});
            }
    return table;
}

bool identity_table_all_pass(const Table& t) {
    const std::size_t col = t.col_index("pass");
    for (std::size_t i = 0; i < t.rows(); ++i)
        if (t.number(i, col) != 1.0) return false;
    return true;
}

Potential random_potential(unsigned long long seed, int kind, double p_exponent) {
    if (kind != 0 && kind != 1) throw InvalidArgument("random potential kind must be 0 or 1");
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + kind + 1);
    // explicit 53-bit uniforms: stable across standard-library implementations
    auto u01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto coef = [&] {
        // sequence the draws explicitly: argument evaluation order is unspecified
        const double re = 0.5 - u01();
        const double im = 0.5 - u01();
        return cd(re, im) * 0.5;
    };

    const int cells = 2 + static_cast<int>(rng() % 5);
    std::vector<double> widths(cells);
    double total = 0.0;
    for (double& w : widths) {
        w = 0.5 + u01();
        total += w;
    }
    std::vector<double> mesh(cells + 1, 0.0);
    for (int i = 0; i < cells; ++i) mesh[i + 1] = mesh[i] + widths[i] / total;
    mesh.back() = 1.0;

    auto draw = [&] {
        std::vector<std::vector<cd>> cs(cells);
        for (auto& c : cs) {
            c.push_back(coef());
            if (kind == 1) c.push_back(coef());
        }
        return PiecewisePoly(mesh, std::move(cs));
    };
    PiecewisePoly s1 = draw();
    PiecewisePoly s2 = draw();
    const double sup = std::max({lp_norm(s1, std::numeric_limits<double>::infinity()),
                                 lp_norm(s2, std::numeric_limits<double>::infinity()),
                                 1e-9});
    const cd scale(0.45 / sup, 0.0);
    return Potential(s1.scaled(scale), s2.scaled(scale), p_exponent);
}

} // namespace dirac
