#include <cmath>
#include <random>

#include "dirac/errors.hpp"
#include "dirac/perturbed.hpp"

namespace dirac {

namespace {

// Nodal samples of a piecewise polynomial, cell-pinned at subcell edges.
GridFunction nodal_poly(const PiecewisePoly& f, const GridPtr& grid) {
    GridFunction out(grid);
    for (std::size_t s = 0; s < grid->subcell_count(); ++s)
        for (int j = 0; j < kNodesPerSubcell; ++j)
            out.at(s, j) = f.eval_in_cell(grid->mesh_cell(s), grid->node_x(s, j));
    return out;
}

CellPolys ones_cells(const GridPtr& grid) {
    SubcellPoly one;
    one.c[0] = cd(1.0, 0.0);
    one.deg = 0;
    return CellPolys(grid->subcell_count(), one);
}

// The two cumulative stages of A_j together with their integrand profiles
// Q_1, Q_2 (kept so the plug-back can differentiate each stage exactly).
struct AParts {
    GridFunction q1, q2;
    GridFunction i1, r2;
};

AParts a_parts(const PerturbedSystem& sys, int j, const ProfilePair& z) {
    if (!sys.pot.P)
        throw InvalidArgument("perturbed operator requires a perturbation block");
    if (j != 1 && j != 2) throw InvalidArgument("perturbed family index must be 1 or 2");
    const GridPtr& grid = sys.grid;
    const GridFunction p11 = nodal_poly(sys.pot.P->p11, grid);
    const GridFunction p12 = nodal_poly(sys.pot.P->p12, grid);
    const GridFunction p21 = nodal_poly(sys.pot.P->p21, grid);
    const GridFunction p22 = nodal_poly(sys.pot.P->p22, grid);
    const GridFunction& z1 = sys.base.w.one;
    const GridFunction& w2 = sys.base.w.two;
    const GridFunction& v1 = sys.base.v.one;
    const GridFunction& z2 = sys.base.v.two;

    AParts ap;
    // Q profiles: v2(0) D^{-1} P Y with the exponential prefactors factored out.
    ap.q1 = (z2.pointwise(p11) - v1.pointwise(p21)).pointwise(z.one) +
            (z2.pointwise(p12) - v1.pointwise(p22)).pointwise(z.two);
    ap.q2 = (z1.pointwise(p21) - w2.pointwise(p11)).pointwise(z.one) +
            (z1.pointwise(p22) - w2.pointwise(p12)).pointwise(z.two);
    const CellPolys ones = ones_cells(grid);
    const CellPolys q1c = product_cells(grid, ones, ap.q1);
    const CellPolys q2c = product_cells(grid, ones, ap.q2);
    if (j == 1) {
        ap.i1 = cum_forward_plain(grid, q1c);
        ap.r2 = cum_backward_osc(grid, q2c, sys.mu, +1);
    } else {
        ap.i1 = cum_forward_osc(grid, q1c, sys.mu, +1);
        ap.r2 = cum_backward_plain(grid, q2c);
    }
    return ap;
}

ProfilePair assemble_A(const PerturbedSystem& sys, int j, const AParts& ap) {
    const cd inv_z = cd(1.0, 0.0) / sys.base.z2_at_0;
    ProfilePair out;
    out.pf = (j == 1) ? Prefactor::ExpPlus : Prefactor::ExpOneMinus;
    out.one = inv_z * (sys.base.w.one.pointwise(ap.i1) - sys.base.v.one.pointwise(ap.r2));
    out.two = inv_z * (sys.base.w.two.pointwise(ap.i1) - sys.base.v.two.pointwise(ap.r2));
    return out;
}

} // namespace

PerturbedSystem make_perturbed(const Potential& pot, cd mu, double tol,
                               const GridPtr& grid_in) {
    if (mu == cd(0.0, 0.0))
        throw InvalidArgument("perturbed system requires mu != 0");
    const GridPtr grid = grid_in ? grid_in : CompositeGrid::build(pot.mesh(), mu);
    PerturbedSystem sys;
    sys.pot = pot;
    sys.mu = mu;
    sys.grid = grid;
    sys.base = cauchy_solutions(pot, mu, tol, true, grid);
    return sys;
}

ProfilePair apply_A(const PerturbedSystem& sys, int j, const ProfilePair& z) {
    return assemble_A(sys, j, a_parts(sys, j, z));
}

PerturbedResult solve_perturbed(const PerturbedSystem& sys, int j, double tol) {
    const ProfilePair& base = (j == 1) ? sys.base.w : sys.base.v;
    const cd inv_mu = cd(1.0, 0.0) / sys.mu;

    PerturbedResult out;
    out.z = base;
    double prev_diff = 0.0;
    for (int it = 1; it <= 100; ++it) {
        const ProfilePair az = apply_A(sys, j, out.z);
        ProfilePair next{base.one + inv_mu * az.one, base.two + inv_mu * az.two, base.pf};
        const double diff = std::max((next.one - out.z.one).sup_norm(),
                                     (next.two - out.z.two).sup_norm());
        out.z = std::move(next);
        out.iterations = it;
        if (diff < tol) break;
        if (it > 1 && diff > 0.9 * prev_diff)
            throw ContractionFailure("perturbed fixed point is not contracting at |mu| = " +
                                     std::to_string(std::abs(sys.mu)));
        prev_diff = diff;
    }
    const ProfilePair az = apply_A(sys, j, out.z);
    out.residual = std::max((out.z.one - base.one - inv_mu * az.one).sup_norm(),
                            (out.z.two - base.two - inv_mu * az.two).sup_norm());
    return out;
}

ProfilePair approx_C73(const PerturbedSystem& sys, int j) {
    if (!sys.pot.P)
        throw InvalidArgument("C73 prediction requires a perturbation block");
    if (j != 1 && j != 2) throw InvalidArgument("perturbed family index must be 1 or 2");
    const GridPtr& grid = sys.grid;
    const cd mu = sys.mu;
    const cd inv_mu = cd(1.0, 0.0) / mu;
    const CellPolys s1 = poly_cells(sys.pot.sigma1, grid);
    const CellPolys s2 = poly_cells(sys.pot.sigma2, grid);

    ProfilePair out;
    if (j == 1) {
        const GridFunction g1 = cum_forward_osc(grid, s1, mu, +1);
        const GridFunction b2 = cum_backward_osc(grid, s2, mu, +1);
        const GridFunction bp21 =
            cum_backward_osc(grid, poly_cells(sys.pot.P->p21, grid), mu, +1);
        const GridFunction ip11 = cum_forward_plain(grid, poly_cells(sys.pot.P->p11, grid));
        out.pf = Prefactor::ExpPlus;
        out.one = sys.base.w.one + inv_mu * (ip11 - g1.pointwise(bp21));
        out.two = sys.base.w.two + inv_mu * (b2.pointwise(ip11) - bp21);
    } else {
        const GridFunction g1 = cum_forward_osc(grid, s1, mu, +1);
        const GridFunction b2 = cum_backward_osc(grid, s2, mu, +1);
        const GridFunction fp12 =
            cum_forward_osc(grid, poly_cells(sys.pot.P->p12, grid), mu, +1);
        const GridFunction tp22 = cum_backward_plain(grid, poly_cells(sys.pot.P->p22, grid));
        out.pf = Prefactor::ExpOneMinus;
        out.one = sys.base.v.one + inv_mu * (g1.pointwise(tp22) - fp12);
        out.two = sys.base.v.two + inv_mu * (b2.pointwise(fp12) - tp22);
    }
    return out;
}

double measure_A_norm(const PerturbedSystem& sys, int j, int probes,
                      unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < probes; ++n) {
        ProfilePair z;
        z.pf = (j == 1) ? Prefactor::ExpPlus : Prefactor::ExpOneMinus;
        z.one = GridFunction(sys.grid);
        z.two = GridFunction(sys.grid);
        for (auto& v : z.one.values()) v = cd(unit(rng), unit(rng));
        for (auto& v : z.two.values()) v = cd(unit(rng), unit(rng));
        const double scale = std::max(z.one.sup_norm(), z.two.sup_norm());
        z.one *= cd(1.0 / scale, 0.0);
        z.two *= cd(1.0 / scale, 0.0);
        const ProfilePair az = apply_A(sys, j, z);
        worst = std::max(worst, std::max(az.one.sup_norm(), az.two.sup_norm()));
    }
    return worst;
}

// ---- second-order pathway ----

namespace {

// Exact restriction of a piecewise polynomial to a refinement of its mesh:
// per fine cell, shift the source-cell coefficients to the new local origin.
PiecewisePoly remesh_exact(const PiecewisePoly& f, const std::vector<double>& mesh) {
    std::vector<std::vector<cd>> cells(mesh.size() - 1);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        const std::size_t src = f.cell_index(0.5 * (mesh[i] + mesh[i + 1]));
        const std::vector<cd>& c = f.cells()[src];
        const double delta = mesh[i] - f.mesh()[src];
        std::vector<cd> out(c.size(), cd(0.0, 0.0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            double binom = 1.0, pow = 1.0; // C(k,d) delta^{k-d}, d = k..0
            for (std::size_t d = k + 1; d-- > 0;) {
                out[d] += c[k] * binom * pow;
                if (d > 0) binom *= static_cast<double>(d) / (k - d + 1);
                pow *= delta;
            }
        }
        cells[i] = std::move(out);
    }
    return PiecewisePoly(mesh, std::move(cells));
}

} // namespace

Potential sl_reduce(const PiecewisePoly& sigma) {
    PiecewisePoly tau = sigma.product(sigma);
    PiecewisePoly sig =
        (tau.mesh() == sigma.mesh()) ? sigma : remesh_exact(sigma, tau.mesh());
    PerturbationMatrix P{tau.scaled(cd(0.0, 0.5)), tau.scaled(cd(0.0, 0.5)),
                         tau.scaled(cd(0.0, -0.5)), tau.scaled(cd(0.0, -0.5))};
    return Potential(sig, sig, 2.0, std::move(P));
}

SlResult sl_fundamental(const PiecewisePoly& sigma, cd mu, double tol) {
    SlResult out;
    // The plug-back differentiates the stored integral stages exactly; the only
    // leak is the Neumann tail of the base profiles, which enters multiplied by
    // mu, so the base is solved tighter than the fixed point.
    out.sys = make_perturbed(sl_reduce(sigma), mu, std::min(tol, 1e-13));
    const PerturbedResult r1 = solve_perturbed(out.sys, 1, tol);
    const PerturbedResult r2 = solve_perturbed(out.sys, 2, tol);
    out.iterations_1 = r1.iterations;
    out.iterations_2 = r2.iterations;
    const cd imu = cd(0.0, 1.0) * mu;
    out.y1 = {r1.z.one + r1.z.two, imu * (r1.z.one - r1.z.two), Prefactor::ExpPlus};
    out.y2 = {r2.z.one + r2.z.two, imu * (r2.z.one - r2.z.two), Prefactor::ExpOneMinus};
    return out;
}

SlPrediction sl_predictions(const SlResult& sl) {
    const Potential& pot = sl.sys.pot;
    const GridPtr& grid = sl.sys.grid;
    const cd mu = sl.sys.mu;
    const CellPolys s1 = poly_cells(pot.sigma1, grid);
    const CellPolys s2 = poly_cells(pot.sigma2, grid);
    const CellPolys tc = poly_cells(pot.P->p11.scaled(cd(0.0, -2.0)), grid); // tau
    const GridFunction e(grid, cd(1.0, 0.0));
    const GridFunction k1e = apply_K(pot, mu, 1, e);
    const GridFunction k2e = apply_K(pot, mu, 2, e);
    const GridFunction b = cum_backward_osc(grid, s2, mu, +1);
    const GridFunction g = cum_forward_osc(grid, s1, mu, +1);
    const GridFunction bt = cum_backward_osc(grid, tc, mu, +1);
    const GridFunction ft = cum_forward_osc(grid, tc, mu, +1);
    const GridFunction it = cum_forward_plain(grid, tc);
    const GridFunction tt = cum_backward_plain(grid, tc);
    const cd c = cd(0.0, 1.0) / (2.0 * mu);

    SlPrediction out;
    out.y1_profile = e + b - k1e -
                     cum_backward_osc(grid, product_cells(grid, s2, k1e), mu, +1) +
                     c * (g.pointwise(bt) + bt + b.pointwise(it) + it);
    out.y2_profile = e - g - k2e +
                     cum_forward_osc(grid, product_cells(grid, s1, k2e), mu, +1) +
                     c * (b.pointwise(ft) - ft - g.pointwise(tt) + tt);
    out.rho = rho_remainder(pot, mu);
    return out;
}

double sl_plugback_residual(const SlResult& sl, int which) {
    if (which != 1 && which != 2) throw InvalidArgument("plug-back family must be 1 or 2");
    const PerturbedSystem& sys = sl.sys;
    const GridPtr& grid = sys.grid;
    const cd mu = sys.mu;
    const cd imu = cd(0.0, 1.0) * mu;
    const cd inv_mu = cd(1.0, 0.0) / mu;
    const int j = which;

    // Recover the perturbed profile pair from (y, y^[1]).
    const QuasiDerivativePair& qd = (which == 1) ? sl.y1 : sl.y2;
    ProfilePair zt;
    zt.pf = qd.pf;
    zt.one = cd(0.5, 0.0) * (qd.y + (cd(1.0, 0.0) / imu) * qd.y_quasi);
    zt.two = cd(0.5, 0.0) * (qd.y - (cd(1.0, 0.0) / imu) * qd.y_quasi);

    const AParts ap = a_parts(sys, j, zt);

    // Base profiles and the exact derivatives of their integral stages.
    const GridFunction& z1 = sys.base.w.one;
    const GridFunction& w2 = sys.base.w.two;
    const GridFunction& v1 = sys.base.v.one;
    const GridFunction& z2 = sys.base.v.two;
    const GridFunction sig = nodal_poly(sys.pot.sigma1, grid);
    const cd two_imu = 2.0 * imu;
    const GridFunction z1p = cd(-1.0, 0.0) * sig.pointwise(w2);
    const GridFunction w2p = cd(-1.0, 0.0) * sig.pointwise(z1) - two_imu * w2;
    const GridFunction v1p = two_imu * v1 - sig.pointwise(z2);
    const GridFunction z2p = cd(-1.0, 0.0) * sig.pointwise(v1);

    GridFunction i1p, r2p;
    if (j == 1) {
        i1p = ap.q1;
        r2p = cd(-1.0, 0.0) * ap.q2 - two_imu * ap.r2;
    } else {
        i1p = ap.q1 + two_imu * ap.i1;
        r2p = cd(-1.0, 0.0) * ap.q2;
    }

    // Z-hat = base + mu^{-1} A_j Z~ and its exact derivative (product rule over
    // the stored stages).
    const cd f = inv_mu / sys.base.z2_at_0;
    const GridFunction& b1 = (j == 1) ? z1 : v1;
    const GridFunction& b2 = (j == 1) ? w2 : z2;
    const GridFunction& b1p = (j == 1) ? z1p : v1p;
    const GridFunction& b2p = (j == 1) ? w2p : z2p;
    const GridFunction zh1 = b1 + f * (z1.pointwise(ap.i1) - v1.pointwise(ap.r2));
    const GridFunction zh2 = b2 + f * (w2.pointwise(ap.i1) - z2.pointwise(ap.r2));
    const GridFunction zh1p =
        b1p + f * (z1p.pointwise(ap.i1) + z1.pointwise(i1p) - v1p.pointwise(ap.r2) -
                   v1.pointwise(r2p));
    const GridFunction zh2p =
        b2p + f * (w2p.pointwise(ap.i1) + w2.pointwise(i1p) - z2p.pointwise(ap.r2) -
                   z2.pointwise(r2p));

    // (y^[1])' - sigma y^[1] + (sigma^2 + mu^2) y at profile level; the raw
    // prefactor is e^{i mu x} (j=1) or e^{i mu (1-x)} (j=2).
    GridFunction defect = imu * (zh1p - zh2p) - imu * sig.pointwise(zh1 - zh2) +
                          sig.pointwise(sig).pointwise(zh1 + zh2);
    defect += (2.0 * mu * mu) * ((j == 1) ? zh2 : zh1);

    GridFunction weighted(grid);
    for (std::size_t s = 0; s < grid->subcell_count(); ++s)
        for (int n = 0; n < kNodesPerSubcell; ++n) {
            const double x = grid->node_x(s, n);
            const double phase = (j == 1) ? -mu.imag() * x : -mu.imag() * (1.0 - x);
            weighted.at(s, n) = std::abs(defect.at(s, n)) * std::exp(phase);
        }
    return weighted.lq_norm(1.0);
}

} // namespace dirac
