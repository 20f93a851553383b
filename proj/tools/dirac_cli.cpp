// Command-line front end.  Talks to the library exclusively through the C
// interface; all numerics live behind dirac_asym.h.
//
// Exit codes: 0 success (and, for sweep/verify, all verdicts bounded / all
// identities passing), 1 ran but verdicts fail, 2 configuration or input
// error, 3 series gate violated without fallback, 4 numeric failure.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dirac_asym.h"

namespace {

struct PotGuard {
    dirac_potential* p = nullptr;
    ~PotGuard() { dirac_potential_free(p); }
};

struct TableGuard {
    dirac_table* t = nullptr;
    ~TableGuard() { dirac_table_free(t); }
};

int status_exit(dirac_status s) {
    std::fprintf(stderr, "error: %s\n", dirac_last_error());
    switch (s) {
        case DIRAC_ERR_ARGUMENT:
        case DIRAC_ERR_PARSE:
        case DIRAC_ERR_IO:
            return 2;
        case DIRAC_ERR_GATE:
            return 3;
        default:
            return 4;
    }
}

// Options shared by every subcommand.
struct Common {
    std::string potential;
    std::string out;
    std::string format = "csv";
    double tol = 1e-10;
    unsigned long long seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--potential", potential, "potential definition file (JSON)");
        cmd->add_option("--out", out, "output path (default: stdout)");
        cmd->add_option("--format", format, "output format: csv or jsonl")
            ->check(CLI::IsMember({"csv", "jsonl"}));
        cmd->add_option("--tol", tol, "series/identity tolerance, in (0, 1e-2]");
        cmd->add_option("--seed", seed,
                        "random potential seed (used when --potential is absent)");
    }

    int fmt() const { return format == "jsonl" ? 1 : 0; }

    // Loads the requested potential, or a seeded random one when no file is
    // given (the verification corpus workflow).
    dirac_status make(dirac_potential** out_pot) const {
        if (!potential.empty()) return dirac_potential_load(potential.c_str(), out_pot);
        return dirac_potential_random(seed, 0, 1.5, out_pot);
    }
};

int emit(const dirac_table* t, const Common& c) {
    const char* path = c.out.empty() ? "/dev/stdout" : c.out.c_str();
    const dirac_status s = dirac_table_write(t, path, c.fmt());
    if (s != DIRAC_OK) return status_exit(s);
    return 0;
}

bool has_nonfinite(const dirac_table* t) {
    for (size_t i = 0; i < dirac_table_rows(t); ++i)
        for (size_t j = 0; j < dirac_table_cols(t); ++j)
            if (!dirac_table_cell_is_text(t, i, j) &&
                !std::isfinite(dirac_table_cell_number(t, i, j)))
                return true;
    return false;
}

std::vector<double> parse_ray_list(const std::string& s, bool& ok) {
    std::vector<double> rays;
    ok = true;
    const char* p = s.c_str();
    while (*p) {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) {
            ok = false;
            return rays;
        }
        rays.push_back(v);
        p = end;
        while (*p == ' ') ++p;
        if (*p == ',') ++p;
        else if (*p) {
            ok = false;
            return rays;
        }
    }
    ok = !rays.empty();
    return rays;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("dirac-cli ") + dirac_version() +
                 " - fundamental solutions and asymptotics of 1-D Dirac systems"};
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "per-x profile table at one mu");
    Common solve_c;
    solve_c.attach(solve);
    std::vector<double> solve_mu{20.0, 0.0};
    double solve_r = 0.0;
    bool solve_raw = false, solve_nofb = false;
    solve->add_option("--mu", solve_mu, "spectral parameter: re im")->expected(2);
    solve->add_option("--r", solve_r, "half-plane offset (Im mu >= -r)");
    solve->add_flag("--raw", solve_raw,
                    "multiply exponential prefactors back in (overflow clamps to inf)");
    solve->add_flag("--no-fallback", solve_nofb,
                    "fail on gate violation instead of using the direct solver");

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "boundedness verdicts over |mu| doublings");
    Common sweep_c;
    sweep_c.attach(sweep);
    std::string sweep_rays = "0";
    double sweep_t0 = 20.0, sweep_r = 0.0;
    int sweep_doublings = 5;
    std::string sweep_tiers;
    bool sweep_nofb = false;
    sweep->add_option("--rays", sweep_rays, "comma list of ray angles (radians)");
    sweep->add_option("--t0", sweep_t0, "starting radius");
    sweep->add_option("--doublings", sweep_doublings, "number of radius doublings");
    sweep->add_option("--r", sweep_r, "half-plane offset");
    sweep->add_option("--tiers", sweep_tiers,
                      "comma list: T,S,R,main1-c,main1-s,C73-W,C73-V,cor-ksq");
    sweep->add_flag("--no-fallback", sweep_nofb, "fail instead of direct-solver fallback");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "exact-identity and bound suite");
    Common verify_c;
    verify_c.attach(verify);
    verify_c.tol = 1e-8;
    std::vector<double> verify_mu;
    verify->add_option("--mu", verify_mu, "single sample mu: re im (default: built-in set)")
        ->expected(2);

    // ---- perturbed ----
    auto* pert = app.add_subcommand("perturbed", "mu^{-1}-perturbed fundamental system");
    Common pert_c;
    pert_c.attach(pert);
    std::vector<double> pert_mu{100.0, 0.0};
    pert->add_option("--mu", pert_mu, "spectral parameter: re im")->expected(2);

    // ---- sl ----
    auto* sl = app.add_subcommand("sl", "second-order pathway (sigma = sigma1)");
    Common sl_c;
    sl_c.attach(sl);
    std::vector<double> sl_mu{100.0, 0.0};
    sl->add_option("--mu", sl_mu, "spectral parameter: re im")->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints message/help
        return e.get_name() == "CallForHelp" ? 0 : 2;
    }

    if (solve->parsed()) {
        PotGuard pot;
        dirac_status s = solve_c.make(&pot.p);
        if (s != DIRAC_OK) return status_exit(s);
        dirac_solve_options opt;
        dirac_solve_options_init(&opt);
        opt.mu_re = solve_mu[0];
        opt.mu_im = solve_mu[1];
        opt.r = solve_r;
        opt.tol = solve_c.tol;
        opt.raw = solve_raw ? 1 : 0;
        opt.allow_fallback = solve_nofb ? 0 : 1;
        TableGuard t;
        s = dirac_solve(pot.p, &opt, &t.t);
        if (s != DIRAC_OK) return status_exit(s);
        if (solve_raw && has_nonfinite(t.t))
            std::fprintf(stderr,
                         "warning: raw prefactors overflowed; values clamped to inf\n");
        return emit(t.t, solve_c);
    }

    if (sweep->parsed()) {
        PotGuard pot;
        dirac_status s = sweep_c.make(&pot.p);
        if (s != DIRAC_OK) return status_exit(s);
        bool ok = false;
        const std::vector<double> rays = parse_ray_list(sweep_rays, ok);
        if (!ok) {
            std::fprintf(stderr, "error: cannot parse --rays list '%s'\n",
                         sweep_rays.c_str());
            return 2;
        }
        dirac_sweep_options opt;
        dirac_sweep_options_init(&opt);
        opt.rays = rays.data();
        opt.n_rays = rays.size();
        opt.t0 = sweep_t0;
        opt.doublings = sweep_doublings;
        opt.r = sweep_r;
        opt.tiers = sweep_tiers.empty() ? nullptr : sweep_tiers.c_str();
        opt.tol = sweep_c.tol;
        opt.seed = sweep_c.seed;
        opt.allow_fallback = sweep_nofb ? 0 : 1;
        TableGuard t;
        s = dirac_sweep(pot.p, &opt, &t.t);
        if (s != DIRAC_OK) return status_exit(s);
        const int rc = emit(t.t, sweep_c);
        if (rc != 0) return rc;
        return dirac_table_all_bounded(t.t) ? 0 : 1;
    }

    if (verify->parsed()) {
        PotGuard pot;
        dirac_status s = verify_c.make(&pot.p);
        if (s != DIRAC_OK) return status_exit(s);
        dirac_verify_options opt;
        dirac_verify_options_init(&opt);
        opt.exact_tol = verify_c.tol;
        double mu_re = 0, mu_im = 0;
        if (verify_mu.size() == 2) {
            mu_re = verify_mu[0];
            mu_im = verify_mu[1];
            opt.mu_re = &mu_re;
            opt.mu_im = &mu_im;
            opt.n_mu = 1;
        }
        TableGuard t;
        s = dirac_identity_suite(pot.p, &opt, &t.t);
        if (s != DIRAC_OK) return status_exit(s);
        const int rc = emit(t.t, verify_c);
        if (rc != 0) return rc;
        return dirac_table_all_pass(t.t) ? 0 : 1;
    }

    // perturbed and sl share the two-table output shape: the summary goes to
    // --out (or stdout); the per-x profile table lands next to it at
    // <out>.profiles when a path was given.
    const bool is_pert = pert->parsed();
    const Common& c = is_pert ? pert_c : sl_c;
    const std::vector<double>& mu = is_pert ? pert_mu : sl_mu;
    PotGuard pot;
    dirac_status s = c.make(&pot.p);
    if (s != DIRAC_OK) return status_exit(s);
    dirac_perturbed_options opt;
    dirac_perturbed_options_init(&opt);
    opt.mu_re = mu[0];
    opt.mu_im = mu[1];
    opt.tol = c.tol;
    TableGuard profiles, summary;
    s = is_pert ? dirac_perturbed_run(pot.p, &opt, &profiles.t, &summary.t)
                : dirac_sl_run(pot.p, &opt, &profiles.t, &summary.t);
    if (s != DIRAC_OK) return status_exit(s);
    if (!c.out.empty()) {
        const std::string ppath = c.out + ".profiles";
        s = dirac_table_write(profiles.t, ppath.c_str(), c.fmt());
        if (s != DIRAC_OK) return status_exit(s);
    }
    return emit(summary.t, c);
}
