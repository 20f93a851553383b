#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace dirac {

using cd = std::complex<double>;

// Hard cap on the stored polynomial degree per cell.
inline constexpr int kMaxCellDegree = 3;

// Minimal spacing between adjacent mesh breakpoints.
inline constexpr double kMinCellWidth = 1e-12;

// Complex piecewise polynomial on a mesh of [0,1].  Coefficients are stored
// per cell, low-to-high degree, in the local variable (x - cell_left).
// Evaluation is right-continuous at interior breakpoints; x = 1 belongs to
// the last cell.
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::vector<double> mesh, std::vector<std::vector<cd>> cells);

    // Constant function on [0,1].
    static PiecewisePoly constant(cd value);
    // Single-cell polynomial on [0,1], coefficients low-to-high in x.
    static PiecewisePoly single(std::vector<cd> coeffs);

    const std::vector<double>& mesh() const { return mesh_; }
    const std::vector<std::vector<cd>>& cells() const { return cells_; }
    std::size_t cell_count() const { return cells_.size(); }

    cd eval(double x) const;
    // Evaluation pinned to a known cell: at shared breakpoints the plain
    // eval is right-continuous, which is the wrong side for quadrature
    // panels ending exactly on a jump.
    cd eval_in_cell(std::size_t cell, double x) const;
    std::size_t cell_index(double x) const;

    bool is_zero() const;
    int max_degree() const;

    PiecewisePoly scaled(cd factor) const;
    // Derivative, cellwise (the function need not be continuous).
    PiecewisePoly derivative() const;
    // Pointwise product with another piecewise polynomial sharing the mesh.
    // Degrees above kMaxCellDegree are re-projected per cell by Lobatto
    // interpolation on an 8-fold refinement of the mesh.
    PiecewisePoly product(const PiecewisePoly& other) const;

private:
    std::vector<double> mesh_;              // breakpoints, mesh_[0]=0, mesh_.back()=1
    std::vector<std::vector<cd>> cells_;    // local coefficients per cell
};

// ||f||_{L^p[0,1]} for p in [1, inf].  Composite Gauss quadrature per cell;
// exact for even integer p, dense subdivided panels otherwise.
double lp_norm(const PiecewisePoly& f, double p);

// Entries of the mu^{-1} perturbation; same mesh as the host potential.
struct PerturbationMatrix {
    PiecewisePoly p11, p12, p21, p22;
    // Pointwise spectral norm samples used by the remainder functionals.
    double spectral_norm_at(double x) const;
    double spectral_norm_in_cell(std::size_t cell, double x) const;
};

// The potential data of the first-order system: off-diagonal couplings
// sigma1, sigma2 on a shared mesh, the L^p class exponent, and an optional
// mu^{-1} perturbation block.
struct Potential {
    PiecewisePoly sigma1;
    PiecewisePoly sigma2;
    double p_exponent = 1.5;               // 1 <= p <= 2
    std::optional<PerturbationMatrix> P;

    Potential() = default;
    Potential(PiecewisePoly s1, PiecewisePoly s2, double p = 1.5,
              std::optional<PerturbationMatrix> pert = std::nullopt);

    const std::vector<double>& mesh() const { return sigma1.mesh(); }
    double conjugate_exponent() const;     // q with 1/p + 1/q = 1 (inf for p=1)

    static Potential constant(cd s1, cd s2, double p = 1.5);
};

// ||max(|sigma1|,|sigma2|)||_{L^p}: the norm of the dominating envelope,
// computed on the same quadrature nodes as lp_norm so that the pointwise
// domination survives discretization.
double sigma_max_norm(const Potential& pot, double p);

// Structured-text (JSON) potential definition: keys "mesh", "sigma1",
// "sigma2", optional "P" {p11,p12,p21,p22} and "p".  Coefficients are
// [re, im] pairs, low-to-high degree, local variable per cell.
Potential load_potential(const std::string& path);
Potential parse_potential(const std::string& json_text);

} // namespace dirac
