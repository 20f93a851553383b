#include "dirac/functionals.hpp"

#include <cmath>

#include "dirac/errors.hpp"
#include "dirac/oscmoment.hpp"

namespace dirac {
namespace {

// Rewrite coefficients of sum c_k (t-a)^k in powers of (t-a-delta).
std::vector<cd> shifted_coeffs(const std::vector<cd>& c, double delta) {
    std::vector<cd> out(c.size(), cd(0.0, 0.0));
    for (std::size_t k = 0; k < c.size(); ++k) {
        double binom = 1.0; // C(k, j)
        for (std::size_t j = 0; j <= k; ++j) {
            out[j] += c[k] * (binom * std::pow(delta, static_cast<double>(k - j)));
            binom = binom * (k - j) / (j + 1);
        }
    }
    return out;
}

cd partial_forward(const PiecewisePoly& f, cd mu, int sign, double x) {
    // int_0^x e^{sign 2 i mu (t - x)} f(t) dt, anchored at x
    const auto& mesh = f.mesh();
    cd acc(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < mesh.size() && mesh[i] < x; ++i) {
        const double b = std::min(mesh[i + 1], x);
        if (b - mesh[i] <= 0.0) continue;
        acc += osc_cell_moment(Cell{mesh[i], b, f.cells()[i]}, mu, sign, x);
    }
    return acc;
}

cd partial_backward(const PiecewisePoly& f, cd mu, int sign, double x) {
    // int_x^1 e^{sign 2 i mu (t - x)} f(t) dt, anchored at x
    const auto& mesh = f.mesh();
    cd acc(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        if (mesh[i + 1] <= x) continue;
        const double a = std::max(mesh[i], x);
        std::vector<cd> coeffs = (a == mesh[i])
                                     ? f.cells()[i]
                                     : shifted_coeffs(f.cells()[i], a - mesh[i]);
        acc += osc_cell_moment(Cell{a, mesh[i + 1], std::move(coeffs)}, mu, sign, x);
    }
    return acc;
}

cd phase_prefix(const PiecewisePoly& f, cd mu, int sign, double x) {
    // int_0^x e^{sign 2 i mu t} f(t) dt (unanchored)
    const auto& mesh = f.mesh();
    cd acc(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < mesh.size() && mesh[i] < x; ++i) {
        const double b = std::min(mesh[i + 1], x);
        if (b - mesh[i] <= 0.0) continue;
        acc += osc_cell_moment(Cell{mesh[i], b, f.cells()[i]}, mu, sign, 0.0);
    }
    return acc;
}

} // namespace

SpectralPoint make_spectral_point(const Potential& pot, cd mu, double r) {
    if (mu.imag() < -r - 1e-12)
        throw InvalidArgument("mu lies outside the half-plane Im mu > -r");
    SpectralPoint sp;
    sp.mu = mu;
    sp.r = r;
    sp.v_of_r = (r < 0.0) ? 1.0 : std::exp(2.0 * r);
    const double n = sigma_max_norm(pot, pot.p_exponent);
    sp.a_const = 2.0 * sp.v_of_r * sp.v_of_r * n * n * n;
    return sp;
}

double gamma0(const Potential& pot, cd mu, int j, double x) {
    if (j != 1 && j != 2) throw InvalidArgument("gamma0 index must be 1 or 2");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("gamma0 needs x in [0,1]");
    if (j == 1) return std::abs(partial_forward(pot.sigma1, mu, -1, x));
    return std::abs(partial_backward(pot.sigma2, mu, +1, x));
}

GridFunction gamma0_profile(const Potential& pot, cd mu, int j, const GridPtr& grid) {
    if (j != 1 && j != 2) throw InvalidArgument("gamma0 index must be 1 or 2");
    if (j == 1)
        return cum_forward_osc(grid, poly_cells(pot.sigma1, grid), mu, +1).abs_profile();
    return cum_backward_osc(grid, poly_cells(pot.sigma2, grid), mu, +1).abs_profile();
}

double gamma_lq(const Potential& pot, cd mu, int j, double q) {
    auto grid = CompositeGrid::build(pot.mesh(), mu);
    return gamma0_profile(pot, mu, j, grid).lq_norm(q);
}

double gamma_tilde(const Potential& pot, cd mu) {
    auto grid = CompositeGrid::build(pot.mesh(), mu);
    const GridFunction g1 = gamma0_profile(pot, mu, 1, grid);
    const GridFunction g2 = gamma0_profile(pot, mu, 2, grid);
    GridFunction integrand(grid);
    for (std::size_t s = 0; s < grid->subcell_count(); ++s)
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const double x = grid->node_x(s, j);
            const std::size_t c = grid->mesh_cell(s);
            const double a1 = std::abs(g1.at(s, j)), a2 = std::abs(g2.at(s, j));
            integrand.at(s, j) = std::abs(pot.sigma2.eval_in_cell(c, x)) * a1 * a1 +
                                 std::abs(pot.sigma1.eval_in_cell(c, x)) * a2 * a2;
        }
    return integrand.integrate().real();
}

double lambda_big(const Potential& pot, cd mu, double x) {
    const double q = pot.conjugate_exponent();
    const double g1 = gamma_lq(pot, mu, 1, q);
    const double g2 = gamma_lq(pot, mu, 2, q);
    const double p1 = gamma0(pot, mu, 1, x);
    const double p2 = gamma0(pot, mu, 2, x);
    return gamma_tilde(pot, mu) + g1 * g1 + g2 * g2 + p1 * p1 + p2 * p2;
}

double alpha0(const Potential& pot, cd mu, double x) {
    double acc = 0.0;
    for (const PiecewisePoly* f : {&pot.sigma1, &pot.sigma2})
        for (int sign : {-1, +1}) acc += std::abs(phase_prefix(*f, mu, sign, x));
    return acc;
}

AlphaFunctionals alpha_functionals(const Potential& pot, cd mu, double q) {
    auto grid = CompositeGrid::build(pot.mesh(), mu);
    AlphaFunctionals out;
    std::vector<GridFunction> profiles;
    for (const PiecewisePoly* f : {&pot.sigma1, &pot.sigma2}) {
        const CellPolys cells = poly_cells(*f, grid);
        for (int sign : {-1, +1}) {
            profiles.push_back(cum_forward_phase(grid, cells, mu, sign));
            out.alpha_q += profiles.back().lq_norm(q);
        }
    }
    GridFunction integrand(grid);
    for (std::size_t s = 0; s < grid->subcell_count(); ++s)
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const double x = grid->node_x(s, j);
            const std::size_t c = grid->mesh_cell(s);
            double a0 = 0.0;
            for (const auto& p : profiles) a0 += std::abs(p.at(s, j));
            const double env = std::max(std::abs(pot.sigma1.eval_in_cell(c, x)),
                                        std::abs(pot.sigma2.eval_in_cell(c, x)));
            integrand.at(s, j) = env * a0 * a0;
        }
    out.alpha_tilde = integrand.integrate().real();
    return out;
}

double k_P(const Potential& pot, cd mu) {
    if (!pot.P) return 0.0;
    auto grid = CompositeGrid::build(pot.mesh(), mu);
    const GridFunction g1 = gamma0_profile(pot, mu, 1, grid);
    const GridFunction g2 = gamma0_profile(pot, mu, 2, grid);
    GridFunction integrand(grid);
    for (std::size_t s = 0; s < grid->subcell_count(); ++s)
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const double x = grid->node_x(s, j);
            integrand.at(s, j) = pot.P->spectral_norm_in_cell(grid->mesh_cell(s), x) *
                                 (std::abs(g1.at(s, j)) + std::abs(g2.at(s, j)));
        }
    return integrand.integrate().real();
}

double rho_remainder(const Potential& pot, cd mu) {
    const double q = pot.conjugate_exponent();
    const double g1 = gamma_lq(pot, mu, 1, q);
    const double g2 = gamma_lq(pot, mu, 2, q);
    const double am = std::abs(mu);
    if (am <= 0.0) throw InvalidArgument("rho_remainder needs mu != 0");
    return k_P(pot, mu) / am + g1 * g1 + g2 * g2 + gamma_tilde(pot, mu) + 1.0 / (am * am);
}

} // namespace dirac
