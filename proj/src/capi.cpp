#include "dirac_asym.h"

#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dirac/errors.hpp"
#include "dirac/functionals.hpp"
#include "dirac/perturbed.hpp"
#include "dirac/piecewise.hpp"
#include "dirac/solutions.hpp"
#include "dirac/sweep.hpp"
#include "dirac/table.hpp"

using dirac::cd;

struct dirac_potential {
    dirac::Potential p;
};

struct dirac_table {
    dirac::Table t;
};

namespace {

thread_local std::string g_last_error;

dirac_status fail(dirac_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

// Runs the body and maps library exceptions onto the C status codes.
template <typename F>
dirac_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return DIRAC_OK;
    } catch (const dirac::InvalidArgument& e) {
        return fail(DIRAC_ERR_ARGUMENT, e.what());
    } catch (const dirac::ParseError& e) {
        return fail(DIRAC_ERR_PARSE, e.what());
    } catch (const dirac::GateViolation& e) {
        return fail(DIRAC_ERR_GATE, e.what());
    } catch (const dirac::DegenerateNormalizer& e) {
        return fail(DIRAC_ERR_DEGENERATE, e.what());
    } catch (const dirac::NonConvergence& e) {
        return fail(DIRAC_ERR_NO_CONVERGENCE, e.what());
    } catch (const dirac::ContractionFailure& e) {
        return fail(DIRAC_ERR_CONTRACTION, e.what());
    } catch (const dirac::IoError& e) {
        return fail(DIRAC_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(DIRAC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(DIRAC_ERR_INTERNAL, "unknown error");
    }
}

bool bad_tol(double tol) { return !(tol > 0.0) || tol > 1e-2; }

// Overflow clamp for --raw output: non-finite values become +/-inf sentinels.
double clamp_raw(double v) {
    if (std::isfinite(v)) return v;
    if (v < 0.0) return -HUGE_VAL;
    return HUGE_VAL;
}

void push_complex(std::vector<dirac::Table::Cell>& row, cd z) {
    row.emplace_back(clamp_raw(z.real()));
    row.emplace_back(clamp_raw(z.imag()));
}

std::vector<double> uniform_xs(int nx) {
    std::vector<double> xs(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i)
        xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / (nx - 1);
    xs.back() = 1.0;
    return xs;
}

std::vector<dirac::Tier> parse_tiers(const char* list, bool& cor_ksq) {
    cor_ksq = false;
    std::vector<dirac::Tier> tiers;
    if (!list || !*list) {
        tiers = {dirac::Tier::T, dirac::Tier::S, dirac::Tier::R};
        return tiers;
    }
    std::string s(list);
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        std::string name = s.substr(pos, comma - pos);
        while (!name.empty() && name.front() == ' ') name.erase(name.begin());
        while (!name.empty() && name.back() == ' ') name.pop_back();
        if (!name.empty()) {
            if (name == "cor-ksq")
                cor_ksq = true;
            else
                tiers.push_back(dirac::tier_from_name(name));
        }
        pos = comma + 1;
    }
    return tiers;
}

} // namespace

extern "C" {

const char* dirac_version(void) { return "0.1.0"; }

const char* dirac_last_error(void) { return g_last_error.c_str(); }

/* ---- potentials ---- */

dirac_status dirac_potential_load(const char* path, dirac_potential** out) {
    if (!path || !out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    return guarded([&] { *out = new dirac_potential{dirac::load_potential(path)}; });
}

dirac_status dirac_potential_parse(const char* json_text, dirac_potential** out) {
    if (!json_text || !out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    return guarded(
        [&] { *out = new dirac_potential{dirac::parse_potential(json_text)}; });
}

dirac_status dirac_potential_constant(double s1_re, double s1_im, double s2_re,
                                      double s2_im, double p_exponent,
                                      dirac_potential** out) {
    if (!out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    return guarded([&] {
        *out = new dirac_potential{dirac::Potential::constant(
            cd(s1_re, s1_im), cd(s2_re, s2_im), p_exponent)};
    });
}

dirac_status dirac_potential_random(unsigned long long seed, int kind,
                                    double p_exponent, dirac_potential** out) {
    if (!out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    return guarded([&] {
        *out = new dirac_potential{dirac::random_potential(seed, kind, p_exponent)};
    });
}

void dirac_potential_free(dirac_potential* pot) { delete pot; }

dirac_status dirac_potential_lp_norm(const dirac_potential* pot, int which, double p,
                                     double* out) {
    if (!pot || !out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    if (which != 1 && which != 2)
        return fail(DIRAC_ERR_ARGUMENT, "which must be 1 or 2");
    return guarded([&] {
        *out = dirac::lp_norm(which == 1 ? pot->p.sigma1 : pot->p.sigma2, p);
    });
}

dirac_status dirac_potential_sigma_max_norm(const dirac_potential* pot, double p,
                                            double* out) {
    if (!pot || !out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    return guarded([&] { *out = dirac::sigma_max_norm(pot->p, p); });
}

/* ---- point solve ---- */

void dirac_solve_options_init(dirac_solve_options* opt) {
    if (!opt) return;
    opt->mu_re = 20.0;
    opt->mu_im = 0.0;
    opt->r = 0.0;
    opt->tol = 1e-10;
    opt->nx = 129;
    opt->raw = 0;
    opt->allow_fallback = 1;
}

dirac_status dirac_solve(const dirac_potential* pot, const dirac_solve_options* opt,
                         dirac_table** out) {
    if (!pot || !opt || !out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    if (bad_tol(opt->tol)) return fail(DIRAC_ERR_ARGUMENT, "tol must be in (0, 1e-2]");
    if (opt->nx < 2 || opt->nx > 1000000)
        return fail(DIRAC_ERR_ARGUMENT, "nx must be in [2, 1e6]");
    if (opt->r < 0.0) return fail(DIRAC_ERR_ARGUMENT, "r must be nonnegative");
    if (opt->mu_im < -opt->r)
        return fail(DIRAC_ERR_ARGUMENT, "mu leaves the admissible half-plane");
    return guarded([&] {
        const cd mu(opt->mu_re, opt->mu_im);
        const dirac::FundamentalSet fs =
            dirac::cauchy_solutions(pot->p, mu, opt->tol, opt->allow_fallback != 0);
        dirac::Table t({"x",
                        "z1_re", "z1_im", "z2_re", "z2_im",
                        "w1_re", "w1_im", "w2_re", "w2_im",
                        "v1_re", "v1_im", "v2_re", "v2_im",
                        "c1_plus_re", "c1_plus_im", "c1_minus_re", "c1_minus_im",
                        "c2_plus_re", "c2_plus_im", "c2_minus_re", "c2_minus_im",
                        "s1_plus_re", "s1_plus_im", "s1_minus_re", "s1_minus_im",
                        "s2_plus_re", "s2_plus_im", "s2_minus_re", "s2_minus_im",
                        "gamma01", "gamma02"});
        for (double x : uniform_xs(opt->nx)) {
            // prefactors only multiplied back in when raw output is requested
            cd fp(1.0, 0.0), fm(1.0, 0.0), f1m(1.0, 0.0);
            if (opt->raw) {
                fp = dirac::prefactor_value(dirac::Prefactor::ExpPlus, mu, x);
                fm = dirac::prefactor_value(dirac::Prefactor::ExpMinus, mu, x);
                f1m = dirac::prefactor_value(dirac::Prefactor::ExpOneMinus, mu, x);
            }
            std::vector<dirac::Table::Cell> row;
            row.emplace_back(x);
            push_complex(row, fp * fs.w.one.eval(x));   // z1 profile == w1 profile
            push_complex(row, f1m * fs.v.two.eval(x));  // z2 profile == v2 profile
            push_complex(row, fp * fs.w.one.eval(x));
            push_complex(row, fp * fs.w.two.eval(x));
            push_complex(row, f1m * fs.v.one.eval(x));
            push_complex(row, f1m * fs.v.two.eval(x));
            for (const dirac::TwoPhaseComponent* c :
                 {&fs.c1, &fs.c2, &fs.s1, &fs.s2}) {
                push_complex(row, fp * c->plus.eval(x));
                push_complex(row, fm * c->minus.eval(x));
            }
            row.emplace_back(dirac::gamma0(pot->p, mu, 1, x));
            row.emplace_back(dirac::gamma0(pot->p, mu, 2, x));
            t.add_row(std::move(row));
        }
        *out = new dirac_table{std::move(t)};
    });
}

/* ---- sweep ---- */

void dirac_sweep_options_init(dirac_sweep_options* opt) {
    if (!opt) return;
    opt->rays = nullptr;
    opt->n_rays = 0;
    opt->t0 = 20.0;
    opt->doublings = 5;
    opt->r = 0.0;
    opt->tiers = nullptr;
    opt->tol = 1e-10;
    opt->seed = 1;
    opt->allow_fallback = 1;
}

dirac_status dirac_sweep(const dirac_potential* pot, const dirac_sweep_options* opt,
                         dirac_table** out) {
    if (!pot || !opt || !out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    if (!opt->rays || opt->n_rays == 0)
        return fail(DIRAC_ERR_ARGUMENT, "at least one ray is required");
    if (bad_tol(opt->tol)) return fail(DIRAC_ERR_ARGUMENT, "tol must be in (0, 1e-2]");
    return guarded([&] {
        dirac::SweepPlan plan;
        plan.rays.assign(opt->rays, opt->rays + opt->n_rays);
        plan.t0 = opt->t0;
        plan.doublings = opt->doublings;
        plan.r = opt->r;
        plan.tiers = parse_tiers(opt->tiers, plan.include_cor_ksq);
        plan.seed = opt->seed;
        plan.config.neumann_tol = opt->tol;
        plan.config.allow_fallback = opt->allow_fallback != 0;
        dirac::VerdictTable vt = dirac::run_sweep(pot->p, plan);
        *out = new dirac_table{std::move(vt.table)};
    });
}

/* ---- identity suite ---- */

void dirac_verify_options_init(dirac_verify_options* opt) {
    if (!opt) return;
    opt->mu_re = nullptr;
    opt->mu_im = nullptr;
    opt->n_mu = 0;
    opt->xs = nullptr;
    opt->n_x = 0;
    opt->exact_tol = 1e-8;
    opt->strip_halfwidth = 1.0;
}

dirac_status dirac_identity_suite(const dirac_potential* pot,
                                  const dirac_verify_options* opt,
                                  dirac_table** out) {
    if (!pot || !opt || !out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    if (bad_tol(opt->exact_tol))
        return fail(DIRAC_ERR_ARGUMENT, "exact_tol must be in (0, 1e-2]");
    if (opt->n_mu > 0 && (!opt->mu_re || !opt->mu_im))
        return fail(DIRAC_ERR_ARGUMENT, "null mu array");
    if (opt->n_x > 0 && !opt->xs) return fail(DIRAC_ERR_ARGUMENT, "null x array");
    return guarded([&] {
        std::vector<cd> mus;
        if (opt->n_mu == 0) {
            mus = {cd(4.0, 0.8), cd(7.0, -0.6), cd(12.0, 2.5)};
        } else {
            for (std::size_t i = 0; i < opt->n_mu; ++i)
                mus.emplace_back(opt->mu_re[i], opt->mu_im[i]);
        }
        std::vector<double> xs;
        if (opt->n_x == 0)
            xs = {0.0, 0.3, 0.7, 1.0};
        else
            xs.assign(opt->xs, opt->xs + opt->n_x);
        dirac::Table t = dirac::run_identity_suite(pot->p, mus, xs, opt->exact_tol,
                                                   opt->strip_halfwidth);
        *out = new dirac_table{std::move(t)};
    });
}

/* ---- perturbed and second-order runs ---- */

void dirac_perturbed_options_init(dirac_perturbed_options* opt) {
    if (!opt) return;
    opt->mu_re = 100.0;
    opt->mu_im = 0.0;
    opt->tol = 1e-10;
    opt->nx = 129;
}

dirac_status dirac_perturbed_run(const dirac_potential* pot,
                                 const dirac_perturbed_options* opt,
                                 dirac_table** profiles, dirac_table** summary) {
    if (!pot || !opt || !profiles || !summary)
        return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    if (bad_tol(opt->tol)) return fail(DIRAC_ERR_ARGUMENT, "tol must be in (0, 1e-2]");
    if (opt->nx < 2 || opt->nx > 1000000)
        return fail(DIRAC_ERR_ARGUMENT, "nx must be in [2, 1e6]");
    if (!pot->p.P)
        return fail(DIRAC_ERR_ARGUMENT, "potential carries no perturbation block");
    return guarded([&] {
        const cd mu(opt->mu_re, opt->mu_im);
        const dirac::PerturbedSystem sys =
            dirac::make_perturbed(pot->p, mu, opt->tol);
        const dirac::PerturbedResult r1 = dirac::solve_perturbed(sys, 1, opt->tol);
        const dirac::PerturbedResult r2 = dirac::solve_perturbed(sys, 2, opt->tol);
        const dirac::ProfilePair a1 = dirac::approx_C73(sys, 1);
        const dirac::ProfilePair a2 = dirac::approx_C73(sys, 2);

        dirac::Table prof({"x",
                           "w1_re", "w1_im", "w2_re", "w2_im",
                           "v1_re", "v1_im", "v2_re", "v2_im",
                           "w1_pred_re", "w1_pred_im", "w2_pred_re", "w2_pred_im",
                           "v1_pred_re", "v1_pred_im", "v2_pred_re", "v2_pred_im"});
        for (double x : uniform_xs(opt->nx)) {
            std::vector<dirac::Table::Cell> row;
            row.emplace_back(x);
            push_complex(row, r1.z.one.eval(x));
            push_complex(row, r1.z.two.eval(x));
            push_complex(row, r2.z.one.eval(x));
            push_complex(row, r2.z.two.eval(x));
            push_complex(row, a1.one.eval(x));
            push_complex(row, a1.two.eval(x));
            push_complex(row, a2.one.eval(x));
            push_complex(row, a2.two.eval(x));
            prof.add_row(std::move(row));
        }

        const double rho = dirac::rho_remainder(pot->p, mu);
        dirac::Table sum({"family", "iterations", "residual", "sup_error", "rho",
                          "ratio"});
        const dirac::PerturbedResult* rs[2] = {&r1, &r2};
        const dirac::ProfilePair* as[2] = {&a1, &a2};
        for (int j = 0; j < 2; ++j) {
            const dirac::GridFunction d1 = rs[j]->z.one - as[j]->one;
            const dirac::GridFunction d2 = rs[j]->z.two - as[j]->two;
            const double err = std::max(d1.sup_norm(), d2.sup_norm());
            sum.add_row({static_cast<double>(j + 1),
                         static_cast<double>(rs[j]->iterations), rs[j]->residual,
                         err, rho, err / rho});
        }
        *profiles = new dirac_table{std::move(prof)};
        *summary = new dirac_table{std::move(sum)};
    });
}

dirac_status dirac_sl_run(const dirac_potential* pot,
                          const dirac_perturbed_options* opt, dirac_table** profiles,
                          dirac_table** summary) {
    if (!pot || !opt || !profiles || !summary)
        return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    if (bad_tol(opt->tol)) return fail(DIRAC_ERR_ARGUMENT, "tol must be in (0, 1e-2]");
    if (opt->nx < 2 || opt->nx > 1000000)
        return fail(DIRAC_ERR_ARGUMENT, "nx must be in [2, 1e6]");
    return guarded([&] {
        const cd mu(opt->mu_re, opt->mu_im);
        const dirac::SlResult sl =
            dirac::sl_fundamental(pot->p.sigma1, mu, opt->tol);
        const dirac::SlPrediction pr = dirac::sl_predictions(sl);

        dirac::Table prof({"x",
                           "y1_re", "y1_im", "y1_quasi_re", "y1_quasi_im",
                           "y2_re", "y2_im", "y2_quasi_re", "y2_quasi_im",
                           "y1_pred_re", "y1_pred_im", "y2_pred_re", "y2_pred_im"});
        for (double x : uniform_xs(opt->nx)) {
            std::vector<dirac::Table::Cell> row;
            row.emplace_back(x);
            push_complex(row, sl.y1.y.eval(x));
            push_complex(row, sl.y1.y_quasi.eval(x));
            push_complex(row, sl.y2.y.eval(x));
            push_complex(row, sl.y2.y_quasi.eval(x));
            push_complex(row, pr.y1_profile.eval(x));
            push_complex(row, pr.y2_profile.eval(x));
            prof.add_row(std::move(row));
        }

        dirac::Table sum(
            {"family", "iterations", "sup_error", "rho", "ratio", "plugback_l1"});
        const dirac::QuasiDerivativePair* ys[2] = {&sl.y1, &sl.y2};
        const dirac::GridFunction* preds[2] = {&pr.y1_profile, &pr.y2_profile};
        const int iters[2] = {sl.iterations_1, sl.iterations_2};
        for (int j = 0; j < 2; ++j) {
            const double err = (ys[j]->y - *preds[j]).sup_norm();
            sum.add_row({static_cast<double>(j + 1), static_cast<double>(iters[j]),
                         err, pr.rho, err / pr.rho,
                         dirac::sl_plugback_residual(sl, j + 1)});
        }
        *profiles = new dirac_table{std::move(prof)};
        *summary = new dirac_table{std::move(sum)};
    });
}

/* ---- tables ---- */

size_t dirac_table_rows(const dirac_table* t) { return t ? t->t.rows() : 0; }

size_t dirac_table_cols(const dirac_table* t) {
    return t ? t->t.columns().size() : 0;
}

const char* dirac_table_col_name(const dirac_table* t, size_t j) {
    if (!t || j >= t->t.columns().size()) return nullptr;
    return t->t.columns()[j].c_str();
}

int dirac_table_cell_is_text(const dirac_table* t, size_t i, size_t j) {
    if (!t || i >= t->t.rows() || j >= t->t.columns().size()) return 0;
    return std::holds_alternative<std::string>(t->t.cell(i, j)) ? 1 : 0;
}

double dirac_table_cell_number(const dirac_table* t, size_t i, size_t j) {
    if (!t || i >= t->t.rows() || j >= t->t.columns().size())
        return std::nan("");
    const double* v = std::get_if<double>(&t->t.cell(i, j));
    return v ? *v : std::nan("");
}

const char* dirac_table_cell_text(const dirac_table* t, size_t i, size_t j) {
    if (!t || i >= t->t.rows() || j >= t->t.columns().size()) return nullptr;
    const std::string* s = std::get_if<std::string>(&t->t.cell(i, j));
    return s ? s->c_str() : nullptr;
}

void dirac_table_free(dirac_table* t) { delete t; }

dirac_status dirac_table_write(const dirac_table* t, const char* path, int format) {
    if (!t || !path) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    if (format != 0 && format != 1)
        return fail(DIRAC_ERR_ARGUMENT, "format must be 0 (csv) or 1 (jsonl)");
    return guarded([&] { t->t.write_file(path, format == 1); });
}

dirac_status dirac_table_read(const char* path, int format, dirac_table** out) {
    if (!path || !out) return fail(DIRAC_ERR_ARGUMENT, "null pointer");
    if (format != 0 && format != 1)
        return fail(DIRAC_ERR_ARGUMENT, "format must be 0 (csv) or 1 (jsonl)");
    return guarded(
        [&] { *out = new dirac_table{dirac::Table::read_file(path, format == 1)}; });
}

int dirac_table_equal(const dirac_table* a, const dirac_table* b) {
    if (!a || !b) return a == b ? 1 : 0;
    return a->t == b->t ? 1 : 0;
}

int dirac_table_all_bounded(const dirac_table* sweep_table) {
    if (!sweep_table) return 0;
    try {
        const dirac::Table& t = sweep_table->t;
        const std::size_t v = t.col_index("verdict");
        for (std::size_t i = 0; i < t.rows(); ++i)
            if (t.text(i, v) != "bounded") return 0;
        return 1;
    } catch (...) {
        return 0;
    }
}

int dirac_table_all_pass(const dirac_table* identity_table) {
    if (!identity_table) return 0;
    try {
        return dirac::identity_table_all_pass(identity_table->t) ? 1 : 0;
    } catch (...) {
        return 0;
    }
}

} /* extern "C" */
