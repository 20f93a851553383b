#include <cmath>
#include <limits>

#include "dirac/approx.hpp"
#include "dirac/errors.hpp"
#include "dirac/perturbed.hpp"

namespace dirac {

namespace {

constexpr const char* kTierNames[] = {"R", "S", "T", "main1-c", "main1-s",
                                      "C73-W", "C73-V", "SL"};

GridPtr pick_grid(const Potential& pot, cd mu, const GridPtr& grid) {
    return grid ? grid : CompositeGrid::build(pot.mesh(), mu);
}

// gamma1 + gamma2 and gamma1^2 + gamma2^2 show up in every remainder class.
struct GammaPair {
    double g1, g2;
};
GammaPair gamma_norms(const Potential& pot, cd mu) {
    const double q = pot.conjugate_exponent();
    return {gamma_lq(pot, mu, 1, q), gamma_lq(pot, mu, 2, q)};
}

// Pointwise remainder profiles (real values stored in a GridFunction).
GridFunction lambda_profile(const Potential& pot, cd mu, const GridPtr& grid) {
    const GridFunction g1 = gamma0_profile(pot, mu, 1, grid);
    const GridFunction g2 = gamma0_profile(pot, mu, 2, grid);
    const GammaPair g = gamma_norms(pot, mu);
    const double base = gamma_tilde(pot, mu) + g.g1 * g.g1 + g.g2 * g.g2;
    GridFunction out(grid);
    for (std::size_t i = 0; i < out.values().size(); ++i)
        out.values()[i] = base + std::norm(g1.values()[i]) + std::norm(g2.values()[i]);
    return out;
}

GridFunction gamma_sum_profile(const Potential& pot, cd mu, const GridPtr& grid) {
    const GridFunction g1 = gamma0_profile(pot, mu, 1, grid);
    const GridFunction g2 = gamma0_profile(pot, mu, 2, grid);
    const GammaPair g = gamma_norms(pot, mu);
    GridFunction out(grid);
    for (std::size_t i = 0; i < out.values().size(); ++i)
        out.values()[i] =
            g.g1 + g.g2 + std::abs(g1.values()[i]) + std::abs(g2.values()[i]);
    return out;
}

} // namespace

const char* tier_name(Tier t) { return kTierNames[static_cast<int>(t)]; }

Tier tier_from_name(const std::string& name) {
    for (int i = 0; i < 8; ++i)
        if (name == kTierNames[i]) return static_cast<Tier>(i);
    throw InvalidArgument("unknown tier name: " + name);
}

TierPrediction approx_tier(const Potential& pot, cd mu, Tier tier, Target target,
                           const GridPtr& grid_in) {
    if (tier != Tier::R && tier != Tier::S && tier != Tier::T)
        throw InvalidArgument(
            "approx_tier builds profile tiers R/S/T; use approx_main1 or the "
            "perturbed-system module for the remaining tiers");
    const GridPtr grid = pick_grid(pot, mu, grid_in);

    TierPrediction out;
    const GridFunction e(grid, cd(1.0, 0.0));
    if (target == Target::W) {
        out.profile.pf = Prefactor::ExpPlus;
        if (tier == Tier::T) {
            out.profile.one = e;
            out.profile.two = GridFunction(grid);
        } else {
            const GridFunction k1e = apply_K(pot, mu, 1, e);
            const CellPolys s2 = poly_cells(pot.sigma2, grid);
            out.profile.one = e - k1e;
            out.profile.two = cum_backward_osc(grid, s2, mu, +1);
            if (tier == Tier::R)
                out.profile.two -=
                    cum_backward_osc(grid, product_cells(grid, s2, k1e), mu, +1);
        }
    } else {
        out.profile.pf = Prefactor::ExpOneMinus;
        if (tier == Tier::T) {
            out.profile.one = GridFunction(grid);
            out.profile.two = e;
        } else {
            const GridFunction k2e = apply_K(pot, mu, 2, e);
            const CellPolys s1 = poly_cells(pot.sigma1, grid);
            out.profile.two = e - k2e;
            out.profile.one = cd(-1.0, 0.0) * cum_forward_osc(grid, s1, mu, +1);
            if (tier == Tier::R)
                out.profile.one +=
                    cum_forward_osc(grid, product_cells(grid, s1, k2e), mu, +1);
        }
    }

    switch (tier) {
    case Tier::R:
        out.scalar_remainder = gamma_tilde(pot, mu);
        out.remainder = GridFunction(grid, cd(out.scalar_remainder, 0.0));
        break;
    case Tier::S:
        out.remainder = lambda_profile(pot, mu, grid);
        out.scalar_remainder = out.remainder.sup_norm();
        break;
    default:
        out.remainder = gamma_sum_profile(pot, mu, grid);
        out.scalar_remainder = out.remainder.sup_norm();
        break;
    }
    return out;
}

GridFunction quadruple_L(const Potential& pot, cd mu, const GridPtr& grid_in) {
    const GridPtr grid = pick_grid(pot, mu, grid_in);
    const CellPolys s1 = poly_cells(pot.sigma1, grid);
    const CellPolys s2 = poly_cells(pot.sigma2, grid);
    // Innermost to outermost; every oscillatory stage is anchored, so each
    // stored profile stays bounded in the upper half-plane.
    GridFunction a = cum_forward_phase(grid, s2, mu, +1);
    GridFunction b = cum_forward_osc(grid, product_cells(grid, s1, a), mu, +1);
    GridFunction c = cum_forward_plain(grid, product_cells(grid, s2, b));
    return cum_forward_osc(grid, product_cells(grid, s1, c), mu, +1);
}

cd quadruple_L_at(const Potential& pot, cd mu, double x) {
    return quadruple_L(pot, mu, nullptr).eval(x);
}

CauchyPrediction approx_main1(const Potential& pot, cd mu, const GridPtr& grid_in) {
    const GridPtr grid = pick_grid(pot, mu, grid_in);
    const CellPolys s1 = poly_cells(pot.sigma1, grid);
    const CellPolys s2 = poly_cells(pot.sigma2, grid);
    const GridFunction e(grid, cd(1.0, 0.0));

    // Shared building blocks.  All minus-phase profiles below are algebraic
    // regroupings of the raw iterated integrals: the unanchored forms mix
    // e^{+-2i mu x} factors that overflow for large Im mu, while each factor
    // here is either phase-anchored or a plain cumulative of such.
    const GridFunction g1 = cum_forward_osc(grid, s1, mu, +1);   // int_0^x e^{2imu(x-t)} s1
    const GridFunction b2 = cum_forward_phase(grid, s2, mu, +1); // int_0^x e^{2imu t} s2
    const GridFunction k11e = cum_forward_plain(grid, product_cells(grid, s2, g1));
    const cd b2_full = b2.eval(1.0);

    CauchyPrediction out;
    out.gamma_tilde = gamma_tilde(pot, mu);

    // c1 = e^{imux}(1 - K1e) + e^{-imux}(G1(x) int_0^1 e^{2imut} s2 + L).
    out.c1.plus = e - apply_K(pot, mu, 1, e);
    out.c1.minus = b2_full * g1 + quadruple_L(pot, mu, grid);

    // c2 = -e^{-imux}(B2(x) + int_0^x s2(t) int_0^t e^{2imu(t-s)} s1(s) B2(s) ds dt).
    GridFunction mid = cum_forward_osc(grid, product_cells(grid, s1, b2), mu, +1);
    out.c2.plus = GridFunction(grid);
    out.c2.minus = cd(-1.0, 0.0) * (b2 + cum_forward_plain(grid, product_cells(grid, s2, mid)));

    // s1 = e^{-imux}(-G1 - G1 * K11e + int_0^x e^{2imu(x-s)} s2(s) G1(s)^2 ds).
    out.s1.plus = GridFunction(grid);
    out.s1.minus = cum_forward_osc(grid, product_cells(grid, s2, g1, g1), mu, +1) -
                   g1 - g1.pointwise(k11e);

    // s2 = e^{-imux}(1 + K11e).
    out.s2.plus = GridFunction(grid);
    out.s2.minus = e + k11e;
    return out;
}

namespace {

// Error of a profile-level prediction against the computed pair: worst of the
// two components at each node, ratio against the declared remainder profile.
TierErrors profile_errors(const ProfilePair& computed, const TierPrediction& pred) {
    const GridFunction d1 = computed.one - pred.profile.one;
    const GridFunction d2 = computed.two - pred.profile.two;
    TierErrors te;
    for (std::size_t i = 0; i < d1.values().size(); ++i) {
        const double err = std::max(std::abs(d1.values()[i]), std::abs(d2.values()[i]));
        const double rem = pred.remainder.values()[i].real();
        te.sup_error = std::max(te.sup_error, err);
        const double ratio =
            err == 0.0 ? 0.0
                       : (rem > 0.0 ? err / rem : std::numeric_limits<double>::infinity());
        if (ratio >= te.ratio) {
            te.ratio = ratio;
            te.remainder = rem;
        }
    }
    return te;
}

// Two-phase error |dplus e^{imux} + dminus e^{-imux}| / (|e^{imux}| + |e^{-imux}|),
// evaluated through the stable sigmoid weights of the two phases.
double two_phase_error(const TwoPhaseComponent& computed, const TwoPhaseComponent& pred,
                       cd mu, std::size_t i, double x) {
    const cd dp = computed.plus.values()[i] - pred.plus.values()[i];
    const cd dm = computed.minus.values()[i] - pred.minus.values()[i];
    const double m = 2.0 * mu.imag() * x;
    const double wp = 1.0 / (1.0 + std::exp(std::min(m, 700.0)));   // |e^{imux}| share
    const double wm = 1.0 / (1.0 + std::exp(std::min(-m, 700.0)));  // |e^{-imux}| share
    const cd rot = std::exp(cd(0.0, mu.real() * x));
    return std::abs(dp * rot * wp + dm * wm / rot);
}

TierErrors cauchy_errors(const std::array<const TwoPhaseComponent*, 2>& computed,
                         const std::array<const TwoPhaseComponent*, 2>& pred,
                         cd mu, const GridPtr& grid, double gamma_tilde_val) {
    TierErrors te;
    te.remainder = gamma_tilde_val;
    for (std::size_t s = 0; s < grid->subcell_count(); ++s)
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const std::size_t i = s * kNodesPerSubcell + j;
            const double x = grid->node_x(s, j);
            for (int col = 0; col < 2; ++col)
                te.sup_error = std::max(
                    te.sup_error, two_phase_error(*computed[col], *pred[col], mu, i, x));
        }
    te.ratio = te.sup_error == 0.0
                   ? 0.0
                   : (gamma_tilde_val > 0.0 ? te.sup_error / gamma_tilde_val
                                            : std::numeric_limits<double>::infinity());
    return te;
}

// C73 tiers: first-order mu^{-1} prediction against the perturbed fixed point,
// profile sup error against rho(mu).
TierErrors c73_errors(const Potential& pot, cd mu, int j, const FundamentalSet& fs,
                      const GridPtr& grid) {
    PerturbedSystem sys{pot, mu, fs, grid};
    const PerturbedResult solved = solve_perturbed(sys, j);
    const ProfilePair pred = approx_C73(sys, j);
    const GridFunction d1 = solved.z.one - pred.one;
    const GridFunction d2 = solved.z.two - pred.two;
    TierErrors te;
    te.sup_error = std::max(d1.sup_norm(), d2.sup_norm());
    te.remainder = rho_remainder(pot, mu);
    te.ratio = te.sup_error == 0.0
                   ? 0.0
                   : (te.remainder > 0.0 ? te.sup_error / te.remainder
                                         : std::numeric_limits<double>::infinity());
    return te;
}

} // namespace

TierErrors measure_tier(const Potential& pot, cd mu, double /*r*/, Tier tier,
                        const FundamentalSet& fs, const GridPtr& grid_in) {
    const GridPtr grid = grid_in ? grid_in : fs.w.one.grid();
    switch (tier) {
    case Tier::R:
    case Tier::S:
    case Tier::T: {
        const TierErrors ew =
            profile_errors(fs.w, approx_tier(pot, mu, tier, Target::W, grid));
        const TierErrors ev =
            profile_errors(fs.v, approx_tier(pot, mu, tier, Target::V, grid));
        TierErrors te = ew.ratio >= ev.ratio ? ew : ev;
        te.sup_error = std::max(ew.sup_error, ev.sup_error);
        return te;
    }
    case Tier::Main1C: {
        const CauchyPrediction cp = approx_main1(pot, mu, grid);
        return cauchy_errors({&fs.c1, &fs.c2}, {&cp.c1, &cp.c2}, mu, grid, cp.gamma_tilde);
    }
    case Tier::Main1S: {
        const CauchyPrediction cp = approx_main1(pot, mu, grid);
        return cauchy_errors({&fs.s1, &fs.s2}, {&cp.s1, &cp.s2}, mu, grid, cp.gamma_tilde);
    }
    case Tier::C73W:
        return c73_errors(pot, mu, 1, fs, grid);
    case Tier::C73V:
        return c73_errors(pot, mu, 2, fs, grid);
    default:
        throw InvalidArgument(
            "the SL tier is measured through the second-order pathway, which "
            "needs the scalar coupling rather than a fundamental set");
    }
}

} // namespace dirac
