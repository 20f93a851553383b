#pragma once

#include <optional>

#include "dirac/approx.hpp"
#include "dirac/identities.hpp"
#include "dirac/table.hpp"

namespace dirac {

// Shared numeric knobs.
struct RunConfig {
    double neumann_tol = 1e-10;
    double oracle_tol = 1e-12;
    bool allow_fallback = true; // direct-oracle fallback on gate violations
    int min_subcells_per_cell = 16;
};

// Half-plane sweep: |mu| = t0 * 2^k, k = 0..doublings, along each ray angle.
struct SweepPlan {
    std::vector<double> rays;   // angles theta; mu = t e^{i theta}
    double t0 = 20.0;
    int doublings = 5;
    double r = 0.0;             // half-plane offset, Im mu > -r
    std::vector<Tier> tiers = {Tier::T, Tier::S, Tier::R};
    bool include_cor_ksq = false;
    unsigned long long seed = 1;
    RunConfig config;
};

// One verdict series per (tier, ray): bounded iff the max ratio over the
// radii stays within 10x the median of the first two usable radii's ratios
// (gate-skipped points shift the baseline up; they never fail a series).
struct VerdictTable {
    Table table; // ray, radius, tier, sup_error, remainder, ratio, gate_ok, skipped, verdict
    bool all_bounded = false;
    bool gate_limited = false; // some points were skipped at the series start
};

VerdictTable run_sweep(const Potential& pot, const SweepPlan& plan);

// Identity suite over explicit sample sets; rows per (identity, mu, x).
Table run_identity_suite(const Potential& pot, const std::vector<cd>& mu_samples,
                         const std::vector<double>& x_samples, double exact_tol = 1e-8,
                         double d = 1.0);
bool identity_table_all_pass(const Table& t);

// Deterministic random potentials (explicit generator, stable across
// platforms).  kind: 0 piecewise-constant, 1 piecewise-linear.
Potential random_potential(unsigned long long seed, int kind, double p_exponent = 1.5);

// Worker cap honoring DIRAC_ASYM_THREADS.
int sweep_thread_count();

} // namespace dirac
