#include "dirac/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dirac/errors.hpp"

namespace dirac {
namespace {

// 12-point Gauss-Legendre rule on [-1,1]; exact through degree 23.
constexpr int kGaussN = 12;
constexpr double kGaussX[kGaussN] = {
    -0.98156063424671925, -0.90411725637047486, -0.76990267419430469,
    -0.58731795428661745, -0.36783149899818019, -0.12523340851146892,
    0.12523340851146892,  0.36783149899818019,  0.58731795428661745,
    0.76990267419430469,  0.90411725637047486,  0.98156063424671925,
};
constexpr double kGaussW[kGaussN] = {
    0.047175336386511827, 0.10693932599531843, 0.16007832854334623,
    0.20316742672306592,  0.23349253653835481, 0.24914704581340279,
    0.24914704581340279,  0.23349253653835481, 0.20316742672306592,
    0.16007832854334623,  0.10693932599531843, 0.047175336386511827,
};

// Panels per cell for the |f|^p quadratures: |f|^p is smooth away from zeros
// of f and only Holder there, so subdivision carries the accuracy.
constexpr int kNormPanels = 16;

cd eval_local(const std::vector<cd>& coeffs, double t) {
    cd acc(0.0, 0.0);
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
    return acc;
}

void check_mesh(const std::vector<double>& mesh) {
    if (mesh.size() < 2) throw InvalidArgument("mesh needs at least two breakpoints");
    if (mesh.front() != 0.0 || mesh.back() != 1.0)
        throw InvalidArgument("mesh must span [0,1]");
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i)
        if (mesh[i + 1] - mesh[i] < kMinCellWidth)
            throw InvalidArgument("mesh breakpoints too close or out of order");
}

// Cubic through (t_i, f_i), Newton form expanded to monomial coefficients.
std::vector<cd> fit_cubic(const double t[4], const cd f[4]) {
    cd dd[4] = {f[0], f[1], f[2], f[3]};
    for (int lvl = 1; lvl < 4; ++lvl)
        for (int i = 3; i >= lvl; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (t[i] - t[i - lvl]);
    // expand dd[0] + dd[1](t-t0) + dd[2](t-t0)(t-t1) + dd[3](t-t0)(t-t1)(t-t2)
    std::vector<cd> c(4, cd(0.0, 0.0));
    c[0] = dd[3];
    for (int i = 2; i >= 0; --i) {
        for (int k = 3; k >= 1; --k) c[k] = c[k - 1] - t[i] * c[k];
        c[0] = dd[i] - t[i] * c[0];
    }
    return c;
}

} // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> mesh, std::vector<std::vector<cd>> cells)
    : mesh_(std::move(mesh)), cells_(std::move(cells)) {
    check_mesh(mesh_);
    if (cells_.size() + 1 != mesh_.size())
        throw InvalidArgument("cell count does not match mesh");
    for (auto& c : cells_) {
        if (c.empty()) c.push_back(cd(0.0, 0.0));
        if (static_cast<int>(c.size()) > kMaxCellDegree + 1)
            throw InvalidArgument("cell degree exceeds the supported cap");
    }
}

PiecewisePoly PiecewisePoly::constant(cd value) {
    return PiecewisePoly({0.0, 1.0}, {{value}});
}

PiecewisePoly PiecewisePoly::single(std::vector<cd> coeffs) {
    return PiecewisePoly({0.0, 1.0}, {std::move(coeffs)});
}

std::size_t PiecewisePoly::cell_index(double x) const {
    if (x <= mesh_.front()) return 0;
    if (x >= mesh_.back()) return cells_.size() - 1;
    auto it = std::upper_bound(mesh_.begin(), mesh_.end(), x);
    return static_cast<std::size_t>(it - mesh_.begin()) - 1;
}

cd PiecewisePoly::eval(double x) const {
    std::size_t i = cell_index(x);
    return eval_local(cells_[i], x - mesh_[i]);
}

cd PiecewisePoly::eval_in_cell(std::size_t cell, double x) const {
    if (cell >= cells_.size()) throw InvalidArgument("cell index out of range");
    return eval_local(cells_[cell], x - mesh_[cell]);
}

bool PiecewisePoly::is_zero() const {
    for (const auto& c : cells_)
        for (cd v : c)
            if (v != cd(0.0, 0.0)) return false;
    return true;
}

int PiecewisePoly::max_degree() const {
    int d = 0;
    for (const auto& c : cells_)
        for (std::size_t k = c.size(); k-- > 0;)
            if (c[k] != cd(0.0, 0.0)) {
                d = std::max<int>(d, static_cast<int>(k));
                break;
            }
    return d;
}

PiecewisePoly PiecewisePoly::scaled(cd factor) const {
    auto cells = cells_;
    for (auto& c : cells)
        for (cd& v : c) v *= factor;
    return PiecewisePoly(mesh_, std::move(cells));
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<std::vector<cd>> cells;
    cells.reserve(cells_.size());
    for (const auto& c : cells_) {
        std::vector<cd> d;
        for (std::size_t k = 1; k < c.size(); ++k) d.push_back(double(k) * c[k]);
        if (d.empty()) d.push_back(cd(0.0, 0.0));
        cells.push_back(std::move(d));
    }
    return PiecewisePoly(mesh_, std::move(cells));
}

PiecewisePoly PiecewisePoly::product(const PiecewisePoly& other) const {
    if (mesh_ != other.mesh_)
        throw InvalidArgument("product requires a shared mesh");
    int dsum = max_degree() + other.max_degree();
    if (dsum <= kMaxCellDegree) {
        std::vector<std::vector<cd>> cells;
        cells.reserve(cells_.size());
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const auto& a = cells_[i];
            const auto& b = other.cells_[i];
            std::vector<cd> c(a.size() + b.size() - 1, cd(0.0, 0.0));
            for (std::size_t j = 0; j < a.size(); ++j)
                for (std::size_t k = 0; k < b.size(); ++k) c[j + k] += a[j] * b[k];
            cells.push_back(std::move(c));
        }
        return PiecewisePoly(mesh_, std::move(cells));
    }
    // Exact product exceeds the degree cap: re-project by cubic interpolation
    // on an 8-fold refinement (keeps the projection error at interpolation
    // scale instead of aliasing whole cells).
    constexpr int kRefine = 8;
    constexpr double kLob = 0.44721359549995794; // 1/sqrt(5): cubic Lobatto node
    std::vector<double> mesh;
    std::vector<std::vector<cd>> cells;
    mesh.push_back(0.0);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        double a = mesh_[i], b = mesh_[i + 1];
        double h = (b - a) / kRefine;
        for (int s = 0; s < kRefine; ++s) {
            double lo = a + s * h, hi = (s + 1 == kRefine) ? b : a + (s + 1) * h;
            double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            double tn[4] = {0.0, mid - half * kLob - lo, mid + half * kLob - lo, hi - lo};
            cd fv[4];
            for (int k = 0; k < 4; ++k) {
                double x = lo + tn[k];
                fv[k] = eval(x) * other.eval(x);
            }
            cells.push_back(fit_cubic(tn, fv));
            mesh.push_back(hi);
        }
    }
    mesh.back() = 1.0;
    return PiecewisePoly(std::move(mesh), std::move(cells));
}

double lp_norm(const PiecewisePoly& f, double p) {
    if (!(p >= 1.0)) throw InvalidArgument("lp_norm requires p >= 1");
    const auto& mesh = f.mesh();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
            double a = mesh[i], w = mesh[i + 1] - a;
            for (int s = 0; s < kNormPanels; ++s)
                for (int g = 0; g <= kGaussN; ++g) {
                    double t = (s + (g < kGaussN ? 0.5 * (kGaussX[g] + 1.0) : 1.0)) / kNormPanels;
                    m = std::max(m, std::abs(f.eval(a + w * t)));
                }
        }
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        double a = mesh[i], w = mesh[i + 1] - a;
        double hp = w / kNormPanels;
        for (int s = 0; s < kNormPanels; ++s) {
            double c = a + (s + 0.5) * hp;
            for (int g = 0; g < kGaussN; ++g) {
                double x = c + 0.5 * hp * kGaussX[g];
                acc += 0.5 * hp * kGaussW[g] * std::pow(std::abs(f.eval(x)), p);
            }
        }
    }
    return std::pow(acc, 1.0 / p);
}

namespace {

double spectral_norm_2x2(cd m11, cd m12, cd m21, cd m22) {
    // largest eigenvalue of M^H M, closed form for the 2x2 Hermitian case
    double a = std::norm(m11) + std::norm(m21);
    double d = std::norm(m12) + std::norm(m22);
    cd b = std::conj(m11) * m12 + std::conj(m21) * m22;
    double tr = a + d;
    double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + std::norm(b)));
    return std::sqrt(std::max(0.0, 0.5 * tr + disc));
}

} // namespace

double PerturbationMatrix::spectral_norm_at(double x) const {
    return spectral_norm_2x2(p11.eval(x), p12.eval(x), p21.eval(x), p22.eval(x));
}

double PerturbationMatrix::spectral_norm_in_cell(std::size_t cell, double x) const {
    return spectral_norm_2x2(p11.eval_in_cell(cell, x), p12.eval_in_cell(cell, x),
                             p21.eval_in_cell(cell, x), p22.eval_in_cell(cell, x));
}

Potential::Potential(PiecewisePoly s1, PiecewisePoly s2, double p,
                     std::optional<PerturbationMatrix> pert)
    : sigma1(std::move(s1)), sigma2(std::move(s2)), p_exponent(p), P(std::move(pert)) {
    if (sigma1.mesh() != sigma2.mesh())
        throw InvalidArgument("sigma1 and sigma2 must share a mesh");
    if (!(p_exponent >= 1.0 && p_exponent <= 2.0))
        throw InvalidArgument("class exponent must satisfy 1 <= p <= 2");
    if (P) {
        for (const PiecewisePoly* e : {&P->p11, &P->p12, &P->p21, &P->p22})
            if (e->mesh() != sigma1.mesh())
                throw InvalidArgument("perturbation block must share the potential mesh");
    }
}

double Potential::conjugate_exponent() const {
    if (p_exponent == 1.0) return std::numeric_limits<double>::infinity();
    return p_exponent / (p_exponent - 1.0);
}

Potential Potential::constant(cd s1, cd s2, double p) {
    return Potential(PiecewisePoly::constant(s1), PiecewisePoly::constant(s2), p);
}

double sigma_max_norm(const Potential& pot, double p) {
    if (!(p >= 1.0)) throw InvalidArgument("sigma_max_norm requires p >= 1");
    const auto& mesh = pot.mesh();
    auto env = [&](double x) {
        return std::max(std::abs(pot.sigma1.eval(x)), std::abs(pot.sigma2.eval(x)));
    };
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
            double a = mesh[i], w = mesh[i + 1] - a;
            for (int s = 0; s < kNormPanels; ++s)
                for (int g = 0; g <= kGaussN; ++g) {
                    double t = (s + (g < kGaussN ? 0.5 * (kGaussX[g] + 1.0) : 1.0)) / kNormPanels;
                    m = std::max(m, env(a + w * t));
                }
        }
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
        double a = mesh[i], w = mesh[i + 1] - a;
        double hp = w / kNormPanels;
        for (int s = 0; s < kNormPanels; ++s) {
            double c = a + (s + 0.5) * hp;
            for (int g = 0; g < kGaussN; ++g) {
                double x = c + 0.5 * hp * kGaussX[g];
                acc += 0.5 * hp * kGaussW[g] * std::pow(env(x), p);
            }
        }
    }
    return std::pow(acc, 1.0 / p);
}

namespace {

using nlohmann::json;

cd parse_coeff(const json& j, const char* where) {
    if (j.is_number()) return cd(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cd(j[0].get<double>(), j[1].get<double>());
    throw ParseError(std::string(where) + ": coefficient must be a number or [re, im]");
}

PiecewisePoly parse_piecewise(const json& j, const std::vector<double>& mesh,
                              const char* name) {
    if (!j.is_array() || j.size() + 1 != mesh.size())
        throw ParseError(std::string(name) + ": expected one coefficient list per cell");
    std::vector<std::vector<cd>> cells;
    cells.reserve(j.size());
    for (const auto& cell : j) {
        if (!cell.is_array() || cell.empty())
            throw ParseError(std::string(name) + ": each cell needs a non-empty coefficient list");
        std::vector<cd> c;
        for (const auto& e : cell) c.push_back(parse_coeff(e, name));
        if (static_cast<int>(c.size()) > kMaxCellDegree + 1)
            throw ParseError(std::string(name) + ": cell degree exceeds the supported cap");
        cells.push_back(std::move(c));
    }
    return PiecewisePoly(mesh, std::move(cells));
}

} // namespace

Potential parse_potential(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("potential definition is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("potential definition must be a JSON object");
    if (!j.contains("mesh") || !j["mesh"].is_array())
        throw ParseError("missing \"mesh\" array");
    std::vector<double> mesh;
    for (const auto& e : j["mesh"]) {
        if (!e.is_number()) throw ParseError("mesh entries must be numbers");
        mesh.push_back(e.get<double>());
    }
    try {
        check_mesh(mesh);
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
    if (!j.contains("sigma1") || !j.contains("sigma2"))
        throw ParseError("missing \"sigma1\" or \"sigma2\"");
    PiecewisePoly s1 = parse_piecewise(j["sigma1"], mesh, "sigma1");
    PiecewisePoly s2 = parse_piecewise(j["sigma2"], mesh, "sigma2");
    double p = 1.5;
    if (j.contains("p")) {
        if (!j["p"].is_number()) throw ParseError("\"p\" must be a number");
        p = j["p"].get<double>();
        if (!(p >= 1.0 && p <= 2.0)) throw ParseError("\"p\" must lie in [1, 2]");
    }
    std::optional<PerturbationMatrix> P;
    if (j.contains("P")) {
        const auto& jp = j["P"];
        if (!jp.is_object()) throw ParseError("\"P\" must be an object");
        for (const char* key : {"p11", "p12", "p21", "p22"})
            if (!jp.contains(key))
                throw ParseError(std::string("\"P\" is missing \"") + key + "\"");
        P = PerturbationMatrix{
            parse_piecewise(jp["p11"], mesh, "P.p11"),
            parse_piecewise(jp["p12"], mesh, "P.p12"),
            parse_piecewise(jp["p21"], mesh, "P.p21"),
            parse_piecewise(jp["p22"], mesh, "P.p22"),
        };
    }
    return Potential(std::move(s1), std::move(s2), p, std::move(P));
}

Potential load_potential(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open potential file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_potential(ss.str());
}

} // namespace dirac
