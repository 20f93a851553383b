#include <cmath>

#include "dirac/errors.hpp"
#include "dirac/solutions.hpp"

// Independent solver used as the numerical oracle and as the fallback when
// the series gate fails: Picard iteration on the boundary integral equations
// with per-subcell Gauss-Lobatto quadrature over pointwise exponential
// evaluations.  Shares no code with the closed-form moment engines.

namespace dirac {

cd prefactor_value(Prefactor pf, cd mu, double x) {
    switch (pf) {
        case Prefactor::ExpPlus: return std::exp(cd(0.0, 1.0) * mu * x);
        case Prefactor::ExpMinus: return std::exp(cd(0.0, -1.0) * mu * x);
        case Prefactor::ExpOneMinus: return std::exp(cd(0.0, 1.0) * mu * (1.0 - x));
    }
    throw InvalidArgument("unknown prefactor");
}

namespace {

cd eval_sub(const GridFunction& u, std::size_t s, double xi) {
    const auto& B = Basis::get();
    cd num(0.0, 0.0);
    double den = 0.0;
    for (int j = 0; j < kNodesPerSubcell; ++j) {
        const double d = xi - B.nodes[j];
        if (std::abs(d) < 1e-14) return u.at(s, j);
        const double w = B.bary[j] / d;
        num += w * u.at(s, j);
        den += w;
    }
    return num / den;
}

// F(x) = int_x^1 e^{2 i mu (t-x)} sig(t) u(t) dt
GridFunction bw_osc_quad(const GridPtr& grid, const PiecewisePoly& sig,
                         const GridFunction& u, cd mu) {
    const auto& B = Basis::get();
    const cd tim = cd(0.0, 2.0) * mu;
    GridFunction out(grid);
    cd carry(0.0, 0.0); // suffix integral anchored at the current subcell top
    for (std::size_t s = grid->subcell_count(); s-- > 0;) {
        const double lo = grid->lo(s), hi = grid->hi(s);
        const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int j = kNodesPerSubcell; j-- > 0;) {
            const double xj = m + h * B.nodes[j];
            cd part(0.0, 0.0);
            const double hw = 0.5 * (hi - xj);
            if (hw > 0.0) {
                const double mid = 0.5 * (xj + hi);
                for (int g = 0; g < kNodesPerSubcell; ++g) {
                    const double tg = mid + hw * B.nodes[g];
                    part += B.weights[g] * std::exp(tim * (tg - xj)) * sig.eval_in_cell(grid->mesh_cell(s), tg) *
                            eval_sub(u, s, (tg - m) / h);
                }
                part *= hw;
            }
            out.at(s, j) = part + carry * std::exp(tim * (hi - xj));
        }
        carry = out.at(s, 0);
    }
    return out;
}

// F(x) = int_0^x e^{2 i mu (x-t)} sig(t) u(t) dt
GridFunction fw_osc_quad(const GridPtr& grid, const PiecewisePoly& sig,
                         const GridFunction& u, cd mu) {
    const auto& B = Basis::get();
    const cd tim = cd(0.0, 2.0) * mu;
    GridFunction out(grid);
    cd carry(0.0, 0.0); // prefix integral anchored at the current subcell base
    for (std::size_t s = 0; s < grid->subcell_count(); ++s) {
        const double lo = grid->lo(s), hi = grid->hi(s);
        const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const double xj = m + h * B.nodes[j];
            cd part(0.0, 0.0);
            const double hw = 0.5 * (xj - lo);
            if (hw > 0.0) {
                const double mid = 0.5 * (lo + xj);
                for (int g = 0; g < kNodesPerSubcell; ++g) {
                    const double tg = mid + hw * B.nodes[g];
                    part += B.weights[g] * std::exp(tim * (xj - tg)) * sig.eval_in_cell(grid->mesh_cell(s), tg) *
                            eval_sub(u, s, (tg - m) / h);
                }
                part *= hw;
            }
            out.at(s, j) = part + carry * std::exp(tim * (xj - lo));
        }
        carry = out.at(s, kNodesPerSubcell - 1);
    }
    return out;
}

// F(x) = int_0^x sig(t) u(t) dt
GridFunction fw_plain_quad(const GridPtr& grid, const PiecewisePoly& sig,
                           const GridFunction& u) {
    const auto& B = Basis::get();
    GridFunction out(grid);
    cd carry(0.0, 0.0);
    for (std::size_t s = 0; s < grid->subcell_count(); ++s) {
        const double lo = grid->lo(s), hi = grid->hi(s);
        const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const double xj = m + h * B.nodes[j];
            cd part(0.0, 0.0);
            const double hw = 0.5 * (xj - lo);
            if (hw > 0.0) {
                const double mid = 0.5 * (lo + xj);
                for (int g = 0; g < kNodesPerSubcell; ++g) {
                    const double tg = mid + hw * B.nodes[g];
                    part += B.weights[g] * sig.eval_in_cell(grid->mesh_cell(s), tg) * eval_sub(u, s, (tg - m) / h);
                }
                part *= hw;
            }
            out.at(s, j) = part + carry;
        }
        carry = out.at(s, kNodesPerSubcell - 1);
    }
    return out;
}

// F(x) = int_x^1 sig(t) u(t) dt
GridFunction bw_plain_quad(const GridPtr& grid, const PiecewisePoly& sig,
                           const GridFunction& u) {
    const auto& B = Basis::get();
    GridFunction out(grid);
    cd carry(0.0, 0.0);
    for (std::size_t s = grid->subcell_count(); s-- > 0;) {
        const double lo = grid->lo(s), hi = grid->hi(s);
        const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (int j = kNodesPerSubcell; j-- > 0;) {
            const double xj = m + h * B.nodes[j];
            cd part(0.0, 0.0);
            const double hw = 0.5 * (hi - xj);
            if (hw > 0.0) {
                const double mid = 0.5 * (xj + hi);
                for (int g = 0; g < kNodesPerSubcell; ++g) {
                    const double tg = mid + hw * B.nodes[g];
                    part += B.weights[g] * sig.eval_in_cell(grid->mesh_cell(s), tg) * eval_sub(u, s, (tg - m) / h);
                }
                part *= hw;
            }
            out.at(s, j) = part + carry;
        }
        carry = out.at(s, 0);
    }
    return out;
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

struct PicardOut {
    GridFunction one, two;
    int iterations = 0;
    double residual = 0.0;
};

// u1 = 1 - int_0^x sigma1 u2,  u2 = int_x^1 e^{2 i mu (t-x)} sigma2 u1
PicardOut picard_w(const Potential& pot, cd mu, const GridPtr& grid, double tol) {
    const GridFunction ones(grid, cd(1.0, 0.0));
    PicardOut out{ones, GridFunction(grid), 0, 0.0};
    for (int it = 1; it <= 200; ++it) {
        GridFunction u2 = bw_osc_quad(grid, pot.sigma2, out.one, mu);
        GridFunction u1 = ones - fw_plain_quad(grid, pot.sigma1, u2);
        const double diff = sup_diff(u1, out.one);
        out.one = std::move(u1);
        out.two = std::move(u2);
        out.iterations = it;
        if (diff < tol * std::max(1.0, out.one.sup_norm())) {
            out.two = bw_osc_quad(grid, pot.sigma2, out.one, mu);
            GridFunction check = ones - fw_plain_quad(grid, pot.sigma1, out.two);
            out.residual = sup_diff(check, out.one) / std::max(1.0, out.one.sup_norm());
            return out;
        }
    }
    throw NonConvergence("fixed-point iteration for the first boundary family diverged");
}

// g1 = -int_0^x e^{2 i mu (x-t)} sigma1 g2,  g2 = 1 + int_x^1 sigma2 g1
PicardOut picard_v(const Potential& pot, cd mu, const GridPtr& grid, double tol) {
    const GridFunction ones(grid, cd(1.0, 0.0));
    PicardOut out{GridFunction(grid), ones, 0, 0.0};
    for (int it = 1; it <= 200; ++it) {
        GridFunction g1 = cd(-1.0, 0.0) * fw_osc_quad(grid, pot.sigma1, out.two, mu);
        GridFunction g2 = ones + bw_plain_quad(grid, pot.sigma2, g1);
        const double diff = sup_diff(g2, out.two);
        out.one = std::move(g1);
        out.two = std::move(g2);
        out.iterations = it;
        if (diff < tol * std::max(1.0, out.two.sup_norm())) {
            out.one = cd(-1.0, 0.0) * fw_osc_quad(grid, pot.sigma1, out.two, mu);
            GridFunction check = ones + bw_plain_quad(grid, pot.sigma2, out.one);
            out.residual = sup_diff(check, out.two) / std::max(1.0, out.two.sup_norm());
            return out;
        }
    }
    throw NonConvergence("fixed-point iteration for the second boundary family diverged");
}

} // namespace

cd DirectResult::raw1(cd mu, double x) const {
    return C1 * prefactor_value(w_part.pf, mu, x) * w_part.one.eval(x) +
           C2 * prefactor_value(v_part.pf, mu, x) * v_part.one.eval(x);
}

cd DirectResult::raw2(cd mu, double x) const {
    return C1 * prefactor_value(w_part.pf, mu, x) * w_part.two.eval(x) +
           C2 * prefactor_value(v_part.pf, mu, x) * v_part.two.eval(x);
}

DirectResult solve_direct(const Potential& pot, cd mu, cd C1, cd C2, double tol,
                          const GridPtr& grid_in) {
    const GridPtr grid = grid_in ? grid_in : CompositeGrid::build(pot.mesh(), mu);
    if (grid->mesh() != pot.mesh())
        throw InvalidArgument("grid does not match the potential mesh");
    DirectResult res;
    res.C1 = C1;
    res.C2 = C2;
    res.w_part = {GridFunction(grid), GridFunction(grid), Prefactor::ExpPlus};
    res.v_part = {GridFunction(grid), GridFunction(grid), Prefactor::ExpOneMinus};
    if (C1 != cd(0.0, 0.0)) {
        PicardOut w = picard_w(pot, mu, grid, tol);
        res.w_part.one = std::move(w.one);
        res.w_part.two = std::move(w.two);
        res.iterations = std::max(res.iterations, w.iterations);
        res.residual = std::max(res.residual, w.residual);
    }
    if (C2 != cd(0.0, 0.0)) {
        PicardOut v = picard_v(pot, mu, grid, tol);
        res.v_part.one = std::move(v.one);
        res.v_part.two = std::move(v.two);
        res.iterations = std::max(res.iterations, v.iterations);
        res.residual = std::max(res.residual, v.residual);
    }
    return res;
}

} // namespace dirac
