#include <cmath>

#include "dirac/errors.hpp"
#include "dirac/solutions.hpp"

namespace dirac {

ProfilePair fundamental_w(const Potential& pot, cd mu, double tol, bool allow_fallback,
                          bool* used_fallback, const GridPtr& grid_in, int* terms) {
    const GridPtr grid = grid_in ? grid_in : CompositeGrid::build(pot.mesh(), mu);
    if (used_fallback) *used_fallback = false;
    if (terms) *terms = 0;
    try {
        NeumannResult nr = neumann_solve(pot, mu, 1, tol, grid);
        if (terms) *terms = nr.terms_used;
        GridFunction w2 = cum_backward_osc(
            grid, product_cells(grid, poly_cells(pot.sigma2, grid), nr.z), mu, +1);
        return {std::move(nr.z), std::move(w2), Prefactor::ExpPlus};
    } catch (const GateViolation&) {
        if (!allow_fallback) throw;
        if (used_fallback) *used_fallback = true;
        DirectResult dr = solve_direct(pot, mu, cd(1.0, 0.0), cd(0.0, 0.0),
                                       std::min(tol, 1e-12), grid);
        return dr.w_part;
    }
}

ProfilePair fundamental_v(const Potential& pot, cd mu, double tol, bool allow_fallback,
                          bool* used_fallback, const GridPtr& grid_in, int* terms) {
    const GridPtr grid = grid_in ? grid_in : CompositeGrid::build(pot.mesh(), mu);
    if (used_fallback) *used_fallback = false;
    if (terms) *terms = 0;
    try {
        NeumannResult nr = neumann_solve(pot, mu, 2, tol, grid);
        if (terms) *terms = nr.terms_used;
        GridFunction v1 = cum_forward_osc(
            grid, product_cells(grid, poly_cells(pot.sigma1, grid), nr.z), mu, +1);
        v1 *= cd(-1.0, 0.0);
        return {std::move(v1), std::move(nr.z), Prefactor::ExpOneMinus};
    } catch (const GateViolation&) {
        if (!allow_fallback) throw;
        if (used_fallback) *used_fallback = true;
        DirectResult dr = solve_direct(pot, mu, cd(0.0, 0.0), cd(1.0, 0.0),
                                       std::min(tol, 1e-12), grid);
        return dr.v_part;
    }
}

FundamentalSet cauchy_solutions(const Potential& pot, cd mu, double tol,
                                bool allow_fallback, const GridPtr& grid_in) {
    const GridPtr grid = grid_in ? grid_in : CompositeGrid::build(pot.mesh(), mu);
    FundamentalSet fs;
    bool fb_w = false, fb_v = false;
    fs.w = fundamental_w(pot, mu, tol, allow_fallback, &fb_w, grid, &fs.terms_w);
    fs.v = fundamental_v(pot, mu, tol, allow_fallback, &fb_v, grid, &fs.terms_v);
    fs.via_fallback = fb_w || fb_v;

    fs.z2_at_0 = fs.v.two.eval(0.0);
    if (std::abs(fs.z2_at_0) < 1e-8)
        throw DegenerateNormalizer("normalizer z2(0) is numerically degenerate");
    fs.w2_at_0 = fs.w.two.eval(0.0);
    fs.v2_at_0 = std::exp(cd(0.0, 1.0) * mu) * fs.z2_at_0;

    // c = w - (w2(0)/v2(0)) v and s = v / v2(0), written per phase so that the
    // stored profiles stay free of exponential factors:
    //   c1 = e^{+imux} z1 - e^{-imux} (W2(0)/z2(0)) V1
    //   c2 = e^{+imux} W2 - e^{-imux} (W2(0)/z2(0)) z2
    //   s1 = e^{-imux} V1 / z2(0),   s2 = e^{-imux} z2 / z2(0)
    const cd q = fs.w2_at_0 / fs.z2_at_0;
    fs.c1 = {fs.w.one, cd(-1.0, 0.0) * q * fs.v.one};
    fs.c2 = {fs.w.two, cd(-1.0, 0.0) * q * fs.v.two};
    fs.s1 = {GridFunction(grid), (cd(1.0, 0.0) / fs.z2_at_0) * fs.v.one};
    fs.s2 = {GridFunction(grid), (cd(1.0, 0.0) / fs.z2_at_0) * fs.v.two};

    fs.det_profile = fs.w.one.pointwise(fs.v.two) - fs.w.two.pointwise(fs.v.one);
    return fs;
}

} // namespace dirac
