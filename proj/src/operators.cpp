#include "dirac/operators.hpp"

#include <cmath>

#include "dirac/errors.hpp"

namespace dirac {
namespace {

GridPtr grid_of(const Potential& pot, const GridFunction& z) {
    const GridPtr& g = z.grid();
    if (!g) throw InvalidArgument("operator input carries no grid");
    if (g->mesh() != pot.mesh())
        throw InvalidArgument("operator input grid does not match the potential mesh");
    return g;
}

GridFunction apply_K_cells(const GridPtr& grid, const CellPolys& s1, const CellPolys& s2,
                           cd mu, int j, const GridFunction& z) {
    if (j == 1) {
        // inner: G(t) = int_t^1 e^{2 i mu (s-t)} sigma2 z ds, then int_0^x sigma1 G
        GridFunction inner = cum_backward_osc(grid, product_cells(grid, s2, z), mu, +1);
        return cum_forward_plain(grid, product_cells(grid, s1, inner));
    }
    // inner: H(t) = int_0^t e^{2 i mu (t-s)} sigma1 z ds, then int_x^1 sigma2 H
    GridFunction inner = cum_forward_osc(grid, product_cells(grid, s1, z), mu, +1);
    return cum_backward_plain(grid, product_cells(grid, s2, inner));
}

} // namespace

GridFunction apply_K(const Potential& pot, cd mu, int j, const GridFunction& z) {
    if (j != 1 && j != 2) throw InvalidArgument("operator index must be 1 or 2");
    const GridPtr grid = grid_of(pot, z);
    return apply_K_cells(grid, poly_cells(pot.sigma1, grid), poly_cells(pot.sigma2, grid),
                         mu, j, z);
}

GridFunction apply_K_part(const Potential& pot, cd mu, int j, int part,
                          const GridFunction& z) {
    if ((j != 1 && j != 2) || (part != 1 && part != 2))
        throw InvalidArgument("operator part must be (1|2, 1|2)");
    const GridPtr grid = grid_of(pot, z);
    const CellPolys s1 = poly_cells(pot.sigma1, grid);
    const CellPolys s2 = poly_cells(pot.sigma2, grid);
    if (j == 1 && part == 1) {
        // int_0^x sigma2(s) [int_0^s e^{2 i mu (s-t)} sigma1 dt] z(s) ds
        GridFunction f = cum_forward_osc(grid, s1, mu, +1);
        return cum_forward_plain(grid, product_cells(grid, s2, f, z));
    }
    if (j == 1 && part == 2) {
        // anchored rank-one: [int_0^x e^{2 i mu (x-t)} sigma1] [int_x^1 e^{2 i mu (s-x)} sigma2 z]
        GridFunction f = cum_forward_osc(grid, s1, mu, +1);
        GridFunction b = cum_backward_osc(grid, product_cells(grid, s2, z), mu, +1);
        return f.pointwise(b);
    }
    if (j == 2 && part == 1) {
        // int_x^1 sigma1(s) [int_s^1 e^{2 i mu (t-s)} sigma2 dt] z(s) ds
        GridFunction b = cum_backward_osc(grid, s2, mu, +1);
        return cum_backward_plain(grid, product_cells(grid, s1, b, z));
    }
    // anchored rank-one: [int_x^1 e^{2 i mu (t-x)} sigma2] [int_0^x e^{2 i mu (x-s)} sigma1 z]
    GridFunction b = cum_backward_osc(grid, s2, mu, +1);
    GridFunction f = cum_forward_osc(grid, product_cells(grid, s1, z), mu, +1);
    return b.pointwise(f);
}

GridFunction apply_K_reflected(const Potential& pot, cd mu, int j, const GridFunction& z) {
    if (j != 1 && j != 2) throw InvalidArgument("operator index must be 1 or 2");
    const GridPtr grid = grid_of(pot, z);
    const CellPolys s1 = poly_cells(pot.sigma1, grid);
    const CellPolys s2 = poly_cells(pot.sigma2, grid);
    if (j == 1) {
        // int_0^x sigma2(t) int_t^1 e^{-2 i mu (s-t)} sigma1 z ds dt
        GridFunction inner = cum_backward_osc(grid, product_cells(grid, s1, z), mu, -1);
        return cum_forward_plain(grid, product_cells(grid, s2, inner));
    }
    // int_x^1 sigma1(t) int_0^t e^{-2 i mu (t-s)} sigma2 z ds dt
    GridFunction inner = cum_forward_osc(grid, product_cells(grid, s2, z), mu, -1);
    return cum_backward_plain(grid, product_cells(grid, s1, inner));
}

NeumannResult neumann_solve(const Potential& pot, cd mu, int j, double tol,
                            const GridPtr& grid_in) {
    if (j != 1 && j != 2) throw InvalidArgument("operator index must be 1 or 2");
    const GridPtr grid = grid_in ? grid_in : CompositeGrid::build(pot.mesh(), mu);
    if (grid->mesh() != pot.mesh())
        throw InvalidArgument("grid does not match the potential mesh");

    // Series gate at the tightest admissible half-plane for this mu.
    const double r_eff = std::max(0.0, -mu.imag());
    const SpectralPoint sp = make_spectral_point(pot, mu, r_eff);
    const double q = pot.conjugate_exponent();
    const double gamma_j = gamma0_profile(pot, mu, j, grid).lq_norm(q);
    const double gate = sp.a_const * gamma_j;
    if (gate > 0.5) throw GateViolation(gate);

    const CellPolys s1 = poly_cells(pot.sigma1, grid);
    const CellPolys s2 = poly_cells(pot.sigma2, grid);

    NeumannResult res;
    res.gate = gate;
    res.z = GridFunction(grid, cd(1.0, 0.0));
    GridFunction term = res.z;
    const double cutoff = tol * (1.0 - std::min(gate, 0.999));
    for (int n = 1; n <= 64; ++n) {
        term = apply_K_cells(grid, s1, s2, mu, j, term);
        term *= cd(-1.0, 0.0);
        res.z += term;
        res.terms_used = n;
        if (term.sup_norm() < cutoff) return res;
    }
    throw NonConvergence("series truncation target not reached within 64 terms");
}

} // namespace dirac
