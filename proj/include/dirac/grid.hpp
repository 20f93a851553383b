#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "dirac/piecewise.hpp"

namespace dirac {

// Gauss-Lobatto nodes per subcell.  Degree-11 local interpolation resolves
// the oscillation e^{2i mu x} to ~1e-9 relative once subcells keep
// 2|mu| * width <= ~4.5 (see CompositeGrid::build).
inline constexpr int kNodesPerSubcell = 12;

// Max monomial coefficients handled by the cumulative engine
// (degree-11 interpolants times degree-3 potential cells).
inline constexpr int kEngineCoeffs = 16;

// Reference-interval basis data, computed once: Lobatto nodes and quadrature
// weights on [-1,1], barycentric weights, and the nodal->monomial matrix.
struct Basis {
    std::array<double, kNodesPerSubcell> nodes;
    std::array<double, kNodesPerSubcell> weights;
    std::array<double, kNodesPerSubcell> bary;
    std::array<double, kNodesPerSubcell * kNodesPerSubcell> nodal_to_monomial;
    static const Basis& get();
};

// Composite grid: each potential-mesh cell is split into
// max(min_per_cell, ceil(|mu|/2)) uniform subcells (oscillation-resolving
// refinement, at least the contractual max(16, ceil(|mu|/4))).
class CompositeGrid {
public:
    static std::shared_ptr<const CompositeGrid> build(const std::vector<double>& mesh,
                                                      cd mu, int min_per_cell = 16);

    std::size_t subcell_count() const { return lo_.size(); }
    std::size_t node_count() const { return lo_.size() * kNodesPerSubcell; }
    double lo(std::size_t s) const { return lo_[s]; }
    double hi(std::size_t s) const { return hi_[s]; }
    std::size_t mesh_cell(std::size_t s) const { return cell_[s]; }
    const std::vector<double>& mesh() const { return mesh_; }

    double node_x(std::size_t s, int j) const;
    // Subcell containing x (right-continuous; x=1 -> last).
    std::size_t locate(double x) const;

private:
    std::vector<double> mesh_;
    std::vector<double> lo_, hi_;
    std::vector<std::size_t> cell_;
};

using GridPtr = std::shared_ptr<const CompositeGrid>;

// Complex values at every Lobatto node of a composite grid.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(GridPtr grid, cd fill = cd(0.0, 0.0));
    GridFunction(GridPtr grid, std::vector<cd> values);

    const GridPtr& grid() const { return grid_; }
    std::vector<cd>& values() { return values_; }
    const std::vector<cd>& values() const { return values_; }
    cd& at(std::size_t s, int j) { return values_[s * kNodesPerSubcell + j]; }
    cd at(std::size_t s, int j) const { return values_[s * kNodesPerSubcell + j]; }

    cd eval(double x) const;         // barycentric within the subcell
    double sup_norm() const;         // max over nodes
    double lq_norm(double q) const;  // (integral |f|^q)^{1/q}; q = inf -> sup
    cd integrate() const;            // integral over [0,1]

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(cd factor);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(cd f, GridFunction a) { return a *= f; }

    // Pointwise (nodal) product; the result is treated as a degree-11
    // interpolant again, which is resolved at the grid's refinement level.
    GridFunction pointwise(const GridFunction& o) const;
    GridFunction abs_profile() const; // |f| as real-valued profile

private:
    GridPtr grid_;
    std::vector<cd> values_;
};

// Per-subcell monomial coefficients on the reference interval [-1,1].
struct SubcellPoly {
    std::array<cd, kEngineCoeffs> c{};
    int deg = 0;
};
using CellPolys = std::vector<SubcellPoly>;

// sigma (and P) coefficients re-centered onto a grid's subcells.
struct PotentialCells {
    CellPolys s1, s2;
    std::array<CellPolys, 4> P; // empty when the potential has no P block
    bool has_P = false;
};
PotentialCells restrict_to_grid(const Potential& pot, const GridPtr& grid);
CellPolys poly_cells(const PiecewisePoly& f, const GridPtr& grid);

// Integrand builders: polynomial times grid function(s), degree-exact through
// the nodal->monomial conversion of the interpolant.
CellPolys product_cells(const GridPtr& grid, const CellPolys& poly, const GridFunction& u);
CellPolys product_cells(const GridPtr& grid, const CellPolys& poly, const GridFunction& u,
                        const GridFunction& v);

// Stable cumulative oscillatory integrals.  All "osc" variants anchor the
// phase at the evaluation point, so every stored value is free of the
// exponential growth factor:
//   cum_forward_osc :   F(x) = integral_0^x e^{sign*2i*mu*(x-t)} f(t) dt
//   cum_backward_osc:   F(x) = integral_x^1 e^{sign*2i*mu*(t-x)} f(t) dt
//   cum_forward_plain:  F(x) = integral_0^x f(t) dt
//   cum_backward_plain: F(x) = integral_x^1 f(t) dt
//   cum_forward_phase:  F(x) = integral_0^x e^{sign*2i*mu*t} f(t) dt
//   cum_backward_phase: F(x) = integral_x^1 e^{sign*2i*mu*t} f(t) dt
// The phase variants keep the raw (unanchored) oscillation and may grow like
// e^{2|Im mu| x}; they are meant for the strip-regime functionals.
GridFunction cum_forward_osc(const GridPtr& grid, const CellPolys& f, cd mu, int sign);
GridFunction cum_backward_osc(const GridPtr& grid, const CellPolys& f, cd mu, int sign);
GridFunction cum_forward_plain(const GridPtr& grid, const CellPolys& f);
GridFunction cum_backward_plain(const GridPtr& grid, const CellPolys& f);
GridFunction cum_forward_phase(const GridPtr& grid, const CellPolys& f, cd mu, int sign);
GridFunction cum_backward_phase(const GridPtr& grid, const CellPolys& f, cd mu, int sign);

} // namespace dirac
