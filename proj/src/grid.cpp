#include "dirac/grid.hpp"

#include <algorithm>
#include <cmath>

#include "dirac/errors.hpp"
#include "dirac/oscmoment.hpp"

namespace dirac {
namespace {

// Gauss-Lobatto-Legendre nodes/weights for 12 points on [-1,1] and the
// barycentric weights of that node set (normalized to max 1).
constexpr double kLobX[kNodesPerSubcell] = {
    -1.0000000000000000,  -0.94489927222288222, -0.81927932164400668,
    -0.63287615303186068, -0.39953094096534893, -0.13655293285492755,
    0.13655293285492755,  0.39953094096534893,  0.63287615303186068,
    0.81927932164400668,  0.94489927222288222,  1.0000000000000000,
};
constexpr double kLobW[kNodesPerSubcell] = {
    0.015151515151515152, 0.091684517413196131, 0.15797470556437012,
    0.21250841776102115,  0.25127560319920128,  0.27140524091069618,
    0.27140524091069618,  0.25127560319920128,  0.21250841776102115,
    0.15797470556437012,  0.091684517413196131, 0.015151515151515152,
};
constexpr double kLobBary[kNodesPerSubcell] = {
    -0.23627562321067439, 0.58121777399643054,  -0.76292994698859748,
    0.88486894591971548,  -0.96220153905460933, 1.0000000000000000,
    -1.0000000000000000,  0.96220153905460933,  -0.88486894591971548,
    0.76292994698859748,  -0.58121777399643054, 0.23627562321067439,
};
// Row k gives the xi^k coefficient as a combination of the 12 nodal values.
constexpr double kN2M[kNodesPerSubcell * kNodesPerSubcell] = {
    -0.020507812500000000, 0.053389246685995020, -0.080826372795637979, 0.12135582949558434, -0.20903357581805156, 0.63562268493211018, 0.63562268493211018, -0.20903357581805156, 0.12135582949558434, -0.080826372795637979, 0.053389246685995020, -0.020507812500000000,
    0.020507812500000000, -0.056502579963255172, 0.098655453226193669, -0.19175288706047194, 0.52319746579071809, -4.6547713889630569, 4.6547713889630569, -0.52319746579071809, 0.19175288706047194, -0.098655453226193669, 0.056502579963255172, -0.020507812500000000,
    1.3330078125000000, -3.4638928175414338, 5.2141232442542806, -7.7064983154109746, 12.486686723163827, -7.8634266469656991, -7.8634266469656991, 12.486686723163827, -7.7064983154109746, 5.2141232442542806, -3.4638928175414338, 1.3330078125000000,
    -1.3330078125000000, 3.6658857926650758, -6.3642802967263489, 12.176945328864380, -31.253365992114211, 57.585190464709560, -57.585190464709560, 31.253365992114211, -12.176945328864380, 6.3642802967263489, -3.6658857926650758, 1.3330078125000000,
    -13.330078125000000, 34.293653621791109, -50.022711877591921, 67.528773185076104, -71.233861201527337, 32.764224397252045, 32.764224397252045, -71.233861201527337, 67.528773185076104, -50.022711877591921, 34.293653621791109, -13.330078125000000,
    13.330078125000000, -36.293449079619933, 61.056968674876179, -106.70140257548387, 178.29372871450626, -239.93790328956481, 239.93790328956481, -178.29372871450626, 106.70140257548387, -61.056968674876179, 36.293449079619933, -13.330078125000000,
    45.322265625000000, -114.28338518388100, 156.63820987204141, -178.48006907540296, 151.57840212672804, -60.775423364485488, -60.775423364485488, 151.57840212672804, -178.48006907540296, 156.63820987204141, -114.28338518388100, 45.322265625000000,
    -45.322265625000000, 120.94769097983167, -191.19023968250948, 282.01421118551420, -379.39089713673600, 445.06860522031174, -445.06860522031174, 379.39089713673600, -282.01421118551420, 191.19023968250948, -120.94769097983167, 45.322265625000000,
    -61.508789062500000, 150.11922185934034, -187.68374229592532, 186.56992464884089, -139.32484213888357, 51.828226989127659, 51.828226989127659, -139.32484213888357, 186.56992464884089, -187.68374229592532, 150.11922185934034, -61.508789062500000,
    61.508789062500000, -158.87325376617532, 229.08394895078003, -294.79689470847933, 348.72103222405277, -379.54678750246573, 379.54678750246573, -348.72103222405277, 294.79689470847933, -229.08394895078003, 158.87325376617532, -61.508789062500000,
    28.704101562500000, -66.718986726395009, 75.934947430017188, -68.033486272598643, 46.702648066337092, -16.589224059860627, -16.589224059860627, 46.702648066337092, -68.033486272598643, 75.934947430017188, -66.718986726395009, 28.704101562500000,
    -28.704101562500000, 70.609628653261761, -92.685053099646579, 107.49889365664510, -116.89369527549953, 121.48566649597230, -121.48566649597230, 116.89369527549953, -107.49889365664510, 92.685053099646579, -70.609628653261761, 28.704101562500000,
};

cd two_imu(cd mu, int sign) { return cd(0.0, 2.0 * sign) * mu; }

} // namespace

const Basis& Basis::get() {
    static const Basis b = [] {
        Basis r{};
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            r.nodes[j] = kLobX[j];
            r.weights[j] = kLobW[j];
            r.bary[j] = kLobBary[j];
        }
        for (int k = 0; k < kNodesPerSubcell * kNodesPerSubcell; ++k)
            r.nodal_to_monomial[k] = kN2M[k];
        return r;
    }();
    return b;
}

std::shared_ptr<const CompositeGrid> CompositeGrid::build(const std::vector<double>& mesh,
                                                          cd mu, int min_per_cell) {
    if (mesh.size() < 2 || mesh.front() != 0.0 || mesh.back() != 1.0)
        throw InvalidArgument("grid mesh must span [0,1]");
    if (min_per_cell < 1) throw InvalidArgument("min_per_cell must be positive");
    const int per = std::max(min_per_cell,
                             static_cast<int>(std::ceil(std::abs(mu) / 2.0)));
    auto g = std::make_shared<CompositeGrid>();
    g->mesh_ = mesh;
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        const double a = mesh[i], b = mesh[i + 1];
        const double h = (b - a) / per;
        for (int s = 0; s < per; ++s) {
            g->lo_.push_back(a + s * h);
            g->hi_.push_back(s + 1 == per ? b : a + (s + 1) * h);
            g->cell_.push_back(i);
        }
    }
    return g;
}

double CompositeGrid::node_x(std::size_t s, int j) const {
    const double m = 0.5 * (lo_[s] + hi_[s]);
    const double h = 0.5 * (hi_[s] - lo_[s]);
    return m + h * Basis::get().nodes[j];
}

std::size_t CompositeGrid::locate(double x) const {
    if (x <= lo_.front()) return 0;
    if (x >= hi_.back()) return lo_.size() - 1;
    auto it = std::upper_bound(lo_.begin(), lo_.end(), x);
    return static_cast<std::size_t>(it - lo_.begin()) - 1;
}

GridFunction::GridFunction(GridPtr grid, cd fill)
    : grid_(std::move(grid)), values_(grid_->node_count(), fill) {}

GridFunction::GridFunction(GridPtr grid, std::vector<cd> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->node_count())
        throw InvalidArgument("grid function value count mismatch");
}

cd GridFunction::eval(double x) const {
    const auto& B = Basis::get();
    const std::size_t s = grid_->locate(x);
    const double m = 0.5 * (grid_->lo(s) + grid_->hi(s));
    const double h = 0.5 * (grid_->hi(s) - grid_->lo(s));
    const double xi = std::clamp((x - m) / h, -1.0, 1.0);
    cd num(0.0, 0.0);
    double den = 0.0;
    for (int j = 0; j < kNodesPerSubcell; ++j) {
        const double d = xi - B.nodes[j];
        if (std::abs(d) < 1e-14) return at(s, j);
        const double w = B.bary[j] / d;
        num += w * at(s, j);
        den += w;
    }
    return num / den;
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (cd v : values_) m = std::max(m, std::abs(v));
    return m;
}

double GridFunction::lq_norm(double q) const {
    if (!(q >= 1.0)) throw InvalidArgument("lq_norm requires q >= 1");
    if (std::isinf(q)) return sup_norm();
    const auto& B = Basis::get();
    double acc = 0.0;
    for (std::size_t s = 0; s < grid_->subcell_count(); ++s) {
        const double h = 0.5 * (grid_->hi(s) - grid_->lo(s));
        double cell = 0.0;
        for (int j = 0; j < kNodesPerSubcell; ++j)
            cell += B.weights[j] * std::pow(std::abs(at(s, j)), q);
        acc += h * cell;
    }
    return std::pow(acc, 1.0 / q);
}

cd GridFunction::integrate() const {
    const auto& B = Basis::get();
    cd acc(0.0, 0.0);
    for (std::size_t s = 0; s < grid_->subcell_count(); ++s) {
        const double h = 0.5 * (grid_->hi(s) - grid_->lo(s));
        cd cell(0.0, 0.0);
        for (int j = 0; j < kNodesPerSubcell; ++j) cell += B.weights[j] * at(s, j);
        acc += h * cell;
    }
    return acc;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    if (grid_ != o.grid_) throw InvalidArgument("grid mismatch in +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    if (grid_ != o.grid_) throw InvalidArgument("grid mismatch in -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(cd factor) {
    for (cd& v : values_) v *= factor;
    return *this;
}

GridFunction GridFunction::pointwise(const GridFunction& o) const {
    if (grid_ != o.grid_) throw InvalidArgument("grid mismatch in pointwise product");
    GridFunction r(grid_);
    for (std::size_t i = 0; i < values_.size(); ++i)
        r.values()[i] = values_[i] * o.values_[i];
    return r;
}

GridFunction GridFunction::abs_profile() const {
    GridFunction r(grid_);
    for (std::size_t i = 0; i < values_.size(); ++i)
        r.values()[i] = cd(std::abs(values_[i]), 0.0);
    return r;
}

CellPolys poly_cells(const PiecewisePoly& f, const GridPtr& grid) {
    if (f.mesh() != grid->mesh())
        throw InvalidArgument("piecewise mesh does not match the grid");
    CellPolys out(grid->subcell_count());
    for (std::size_t s = 0; s < grid->subcell_count(); ++s) {
        const std::size_t i = grid->mesh_cell(s);
        const auto& c = f.cells()[i];
        const double m = 0.5 * (grid->lo(s) + grid->hi(s));
        const double h = 0.5 * (grid->hi(s) - grid->lo(s));
        const double delta = m - grid->mesh()[i]; // local offset of the subcell center
        SubcellPoly sp{};
        const int deg = static_cast<int>(c.size()) - 1;
        for (int k = 0; k <= deg; ++k) {
            // (delta + h xi)^k
            double binom = 1.0;
            for (int j = 0; j <= k; ++j) {
                sp.c[j] += c[k] * (binom * std::pow(delta, k - j) * std::pow(h, j));
                binom = binom * (k - j) / (j + 1);
            }
        }
        sp.deg = deg;
        out[s] = sp;
    }
    return out;
}

PotentialCells restrict_to_grid(const Potential& pot, const GridPtr& grid) {
    PotentialCells pc;
    pc.s1 = poly_cells(pot.sigma1, grid);
    pc.s2 = poly_cells(pot.sigma2, grid);
    if (pot.P) {
        pc.has_P = true;
        pc.P[0] = poly_cells(pot.P->p11, grid);
        pc.P[1] = poly_cells(pot.P->p12, grid);
        pc.P[2] = poly_cells(pot.P->p21, grid);
        pc.P[3] = poly_cells(pot.P->p22, grid);
    }
    return pc;
}

namespace {

// Monomial coefficients (degree 11) of the nodal interpolant on subcell s.
void interpolant_coeffs(const GridFunction& u, std::size_t s, cd out[kNodesPerSubcell]) {
    const auto& M = Basis::get().nodal_to_monomial;
    for (int k = 0; k < kNodesPerSubcell; ++k) {
        cd acc(0.0, 0.0);
        for (int j = 0; j < kNodesPerSubcell; ++j)
            acc += M[k * kNodesPerSubcell + j] * u.at(s, j);
        out[k] = acc;
    }
}

CellPolys convolve_poly(const GridPtr& grid, const CellPolys& poly,
                        const std::vector<cd>& nodal) {
    CellPolys out(grid->subcell_count());
    cd um[kNodesPerSubcell];
    const auto& M = Basis::get().nodal_to_monomial;
    for (std::size_t s = 0; s < grid->subcell_count(); ++s) {
        const SubcellPoly& p = poly[s];
        if (p.deg + kNodesPerSubcell > kEngineCoeffs)
            throw InvalidArgument("integrand degree exceeds the engine budget");
        for (int k = 0; k < kNodesPerSubcell; ++k) {
            cd acc(0.0, 0.0);
            for (int j = 0; j < kNodesPerSubcell; ++j)
                acc += M[k * kNodesPerSubcell + j] * nodal[s * kNodesPerSubcell + j];
            um[k] = acc;
        }
        SubcellPoly r{};
        for (int a = 0; a <= p.deg; ++a) {
            if (p.c[a] == cd(0.0, 0.0)) continue;
            for (int b = 0; b < kNodesPerSubcell; ++b) r.c[a + b] += p.c[a] * um[b];
        }
        r.deg = p.deg + kNodesPerSubcell - 1;
        out[s] = r;
    }
    return out;
}

} // namespace

CellPolys product_cells(const GridPtr& grid, const CellPolys& poly, const GridFunction& u) {
    if (u.grid() != grid) throw InvalidArgument("grid mismatch in product_cells");
    return convolve_poly(grid, poly, u.values());
}

CellPolys product_cells(const GridPtr& grid, const CellPolys& poly, const GridFunction& u,
                        const GridFunction& v) {
    if (u.grid() != grid || v.grid() != grid)
        throw InvalidArgument("grid mismatch in product_cells");
    std::vector<cd> w(u.values().size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = u.values()[i] * v.values()[i];
    return convolve_poly(grid, poly, w);
}

GridFunction cum_forward_osc(const GridPtr& grid, const CellPolys& f, cd mu, int sign) {
    const auto& B = Basis::get();
    GridFunction out(grid);
    cd carry(0.0, 0.0);
    std::vector<cd> series;
    for (std::size_t s = 0; s < grid->subcell_count(); ++s) {
        const double h = 0.5 * (grid->hi(s) - grid->lo(s));
        const cd lambda = two_imu(mu, sign) * h;
        const SubcellPoly& p = f[s];
        osc_cumulative_series(lambda, std::span<const cd>(p.c.data(), p.deg + 1), series);
        const cd base = carry * std::exp(lambda);
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const double xi = B.nodes[j];
            out.at(s, j) = std::exp(lambda * xi) * (h * eval_series(series, xi) + base);
        }
        carry = std::exp(lambda) * (h * eval_series(series, 1.0) + base);
    }
    return out;
}

GridFunction cum_backward_osc(const GridPtr& grid, const CellPolys& f, cd mu, int sign) {
    const auto& B = Basis::get();
    GridFunction out(grid);
    cd carry(0.0, 0.0);
    std::vector<cd> series;
    std::array<cd, kEngineCoeffs> refl;
    for (std::size_t si = grid->subcell_count(); si-- > 0;) {
        const double h = 0.5 * (grid->hi(si) - grid->lo(si));
        const cd lambda = two_imu(mu, sign) * h;
        const SubcellPoly& p = f[si];
        for (int k = 0; k <= p.deg; ++k) refl[k] = (k & 1) ? -p.c[k] : p.c[k];
        osc_cumulative_series(lambda, std::span<const cd>(refl.data(), p.deg + 1), series);
        const cd base = carry * std::exp(lambda);
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const double xi = B.nodes[j];
            out.at(si, j) = std::exp(-lambda * xi) * (h * eval_series(series, -xi) + base);
        }
        carry = std::exp(lambda) * (h * eval_series(series, 1.0) + base);
    }
    return out;
}

namespace {

// Antiderivative coefficients A with A(0) = 0 for a subcell polynomial.
void antiderivative(const SubcellPoly& p, std::array<cd, kEngineCoeffs + 1>& A) {
    A.fill(cd(0.0, 0.0));
    for (int k = 0; k <= p.deg; ++k) A[k + 1] = p.c[k] / static_cast<double>(k + 1);
}

} // namespace

GridFunction cum_forward_plain(const GridPtr& grid, const CellPolys& f) {
    const auto& B = Basis::get();
    GridFunction out(grid);
    cd carry(0.0, 0.0);
    std::array<cd, kEngineCoeffs + 1> A;
    for (std::size_t s = 0; s < grid->subcell_count(); ++s) {
        const double h = 0.5 * (grid->hi(s) - grid->lo(s));
        antiderivative(f[s], A);
        const cd a0 = eval_series(std::span<const cd>(A.data(), f[s].deg + 2), -1.0);
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const cd aj = eval_series(std::span<const cd>(A.data(), f[s].deg + 2), B.nodes[j]);
            out.at(s, j) = carry + h * (aj - a0);
        }
        const cd a1 = eval_series(std::span<const cd>(A.data(), f[s].deg + 2), 1.0);
        carry += h * (a1 - a0);
    }
    return out;
}

GridFunction cum_backward_plain(const GridPtr& grid, const CellPolys& f) {
    const auto& B = Basis::get();
    GridFunction out(grid);
    cd carry(0.0, 0.0);
    std::array<cd, kEngineCoeffs + 1> A;
    for (std::size_t si = grid->subcell_count(); si-- > 0;) {
        const double h = 0.5 * (grid->hi(si) - grid->lo(si));
        antiderivative(f[si], A);
        const cd a1 = eval_series(std::span<const cd>(A.data(), f[si].deg + 2), 1.0);
        for (int j = 0; j < kNodesPerSubcell; ++j) {
            const cd aj = eval_series(std::span<const cd>(A.data(), f[si].deg + 2), B.nodes[j]);
            out.at(si, j) = carry + h * (a1 - aj);
        }
        const cd a0 = eval_series(std::span<const cd>(A.data(), f[si].deg + 2), -1.0);
        carry += h * (a1 - a0);
    }
    return out;
}

GridFunction cum_forward_phase(const GridPtr& grid, const CellPolys& f, cd mu, int sign) {
    const auto& B = Basis::get();
    GridFunction out(grid);
    cd carry(0.0, 0.0);
    std::vector<cd> series;
    for (std::size_t s = 0; s < grid->subcell_count(); ++s) {
        const double m = 0.5 * (grid->lo(s) + grid->hi(s));
        const double h = 0.5 * (grid->hi(s) - grid->lo(s));
        const cd lambda = two_imu(mu, sign) * h;
        const SubcellPoly& p = f[s];
        // R(xi) = int_{-1}^{xi} e^{lambda s} p(s) ds
        osc_cumulative_series(-lambda, std::span<const cd>(p.c.data(), p.deg + 1), series);
        const cd phase = std::exp(two_imu(mu, sign) * m);
        for (int j = 0; j < kNodesPerSubcell; ++j)
            out.at(s, j) = carry + h * phase * eval_series(series, B.nodes[j]);
        carry += h * phase * eval_series(series, 1.0);
    }
    return out;
}

GridFunction cum_backward_phase(const GridPtr& grid, const CellPolys& f, cd mu, int sign) {
    const auto& B = Basis::get();
    GridFunction out(grid);
    cd carry(0.0, 0.0);
    std::vector<cd> series;
    for (std::size_t si = grid->subcell_count(); si-- > 0;) {
        const double m = 0.5 * (grid->lo(si) + grid->hi(si));
        const double h = 0.5 * (grid->hi(si) - grid->lo(si));
        const cd lambda = two_imu(mu, sign) * h;
        const SubcellPoly& p = f[si];
        osc_cumulative_series(-lambda, std::span<const cd>(p.c.data(), p.deg + 1), series);
        const cd phase = std::exp(two_imu(mu, sign) * m);
        const cd r1 = eval_series(series, 1.0);
        for (int j = 0; j < kNodesPerSubcell; ++j)
            out.at(si, j) = carry + h * phase * (r1 - eval_series(series, B.nodes[j]));
        carry += h * phase * r1;
    }
    return out;
}

} // namespace dirac
