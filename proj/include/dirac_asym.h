/* C interface of the Dirac-asymptotics library.
 *
 * All functions return dirac_status; results come back as opaque handles.
 * Every handle must be released with the matching _free call.  Error details
 * for the calling thread are available via dirac_last_error().
 */
#ifndef DIRAC_ASYM_H
#define DIRAC_ASYM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dirac_status {
    DIRAC_OK = 0,
    DIRAC_ERR_ARGUMENT = 1,
    DIRAC_ERR_PARSE = 2,
    DIRAC_ERR_GATE = 3,
    DIRAC_ERR_DEGENERATE = 4,
    DIRAC_ERR_NO_CONVERGENCE = 5,
    DIRAC_ERR_CONTRACTION = 6,
    DIRAC_ERR_IO = 7,
    DIRAC_ERR_INTERNAL = 8
} dirac_status;

typedef struct dirac_potential dirac_potential;
typedef struct dirac_table dirac_table;

const char* dirac_version(void);
const char* dirac_last_error(void);

/* ---- potentials ---- */
dirac_status dirac_potential_load(const char* path, dirac_potential** out);
dirac_status dirac_potential_parse(const char* json_text, dirac_potential** out);
dirac_status dirac_potential_constant(double s1_re, double s1_im, double s2_re,
                                      double s2_im, double p_exponent,
                                      dirac_potential** out);
/* kind: 0 piecewise-constant, 1 piecewise-linear */
dirac_status dirac_potential_random(unsigned long long seed, int kind,
                                    double p_exponent, dirac_potential** out);
void dirac_potential_free(dirac_potential* pot);
dirac_status dirac_potential_lp_norm(const dirac_potential* pot, int which,
                                     double p, double* out);
dirac_status dirac_potential_sigma_max_norm(const dirac_potential* pot, double p,
                                            double* out);

/* ---- point solve: per-x profile table ---- */
typedef struct dirac_solve_options {
    double mu_re, mu_im;
    double r;
    double tol;        /* series truncation target */
    int nx;            /* output rows, uniform in [0,1]; default 129 */
    int raw;           /* multiply prefactors back in (clamped on overflow) */
    int allow_fallback;
} dirac_solve_options;
void dirac_solve_options_init(dirac_solve_options* opt);
dirac_status dirac_solve(const dirac_potential* pot, const dirac_solve_options* opt,
                         dirac_table** out);

/* ---- half-plane sweep ---- */
typedef struct dirac_sweep_options {
    const double* rays;  /* angles */
    size_t n_rays;
    double t0;
    int doublings;
    double r;
    const char* tiers;   /* comma list: T,S,R,main1-c,main1-s,cor-ksq */
    double tol;
    unsigned long long seed;
    int allow_fallback;
} dirac_sweep_options;
void dirac_sweep_options_init(dirac_sweep_options* opt);
dirac_status dirac_sweep(const dirac_potential* pot, const dirac_sweep_options* opt,
                         dirac_table** out);

/* ---- identity suite ---- */
typedef struct dirac_verify_options {
    const double* mu_re;     /* sample spectral points */
    const double* mu_im;
    size_t n_mu;
    const double* xs;
    size_t n_x;
    double exact_tol;
    double strip_halfwidth;  /* d for the strip-regime bound */
} dirac_verify_options;
void dirac_verify_options_init(dirac_verify_options* opt);
dirac_status dirac_identity_suite(const dirac_potential* pot,
                                  const dirac_verify_options* opt, dirac_table** out);

/* ---- mu^{-1}-perturbed run (needs a P block) ---- */
typedef struct dirac_perturbed_options {
    double mu_re, mu_im;
    double tol;
    int nx;
} dirac_perturbed_options;
void dirac_perturbed_options_init(dirac_perturbed_options* opt);
/* profiles: per-x perturbed profile table; summary: iterations + tier ratios */
dirac_status dirac_perturbed_run(const dirac_potential* pot,
                                 const dirac_perturbed_options* opt,
                                 dirac_table** profiles, dirac_table** summary);

/* ---- second-order pathway (sigma = sigma1 of the potential) ---- */
dirac_status dirac_sl_run(const dirac_potential* pot,
                          const dirac_perturbed_options* opt,
                          dirac_table** profiles, dirac_table** summary);

/* ---- tables ---- */
size_t dirac_table_rows(const dirac_table* t);
size_t dirac_table_cols(const dirac_table* t);
const char* dirac_table_col_name(const dirac_table* t, size_t j);
int dirac_table_cell_is_text(const dirac_table* t, size_t i, size_t j);
double dirac_table_cell_number(const dirac_table* t, size_t i, size_t j);
const char* dirac_table_cell_text(const dirac_table* t, size_t i, size_t j);
void dirac_table_free(dirac_table* t);

/* format: 0 = CSV (with "# schema=1" header), 1 = JSONL */
dirac_status dirac_table_write(const dirac_table* t, const char* path, int format);
dirac_status dirac_table_read(const char* path, int format, dirac_table** out);
int dirac_table_equal(const dirac_table* a, const dirac_table* b);

/* Exit-code helpers: 1 = true, 0 = false. */
int dirac_table_all_bounded(const dirac_table* sweep_table);
int dirac_table_all_pass(const dirac_table* identity_table);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DIRAC_ASYM_H */
