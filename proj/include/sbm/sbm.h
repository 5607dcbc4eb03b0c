/* C interface to the gamma-stable super-Brownian motion laboratory.
 *
 * Every function returns an sbm_status; nonzero means failure and
 * sbm_last_error() carries a message for the calling thread. Handles are
 * opaque and must be released with their matching free function. The library
 * never prints unless a run is given quiet == 0, in which case progress goes
 * to stderr and the result summary to stdout. */
#ifndef SBM_H
#define SBM_H

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__) || defined(__clang__)
#define SBM_API __attribute__((visibility("default")))
#else
#define SBM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* The first four values double as process exit codes for the bundled CLI. */
typedef enum sbm_status {
    SBM_OK = 0,
    SBM_CRITERION_FAILED = 1, /* a validation criterion did not pass */
    SBM_CONFIG_ERROR = 2,     /* unreadable, unparsable, or inconsistent configuration */
    SBM_NO_CONVERGENCE = 3,   /* iteration budget exhausted before the tolerance */
    SBM_DOMAIN_ERROR = 4,     /* closed-form argument outside its domain */
    SBM_IO_ERROR = 5,
    SBM_INTERNAL_ERROR = 6
} sbm_status;

SBM_API const char* sbm_status_name(sbm_status s);

/* Message describing this thread's most recent failure; empty string if the
 * last call on this thread succeeded. The buffer is owned by the library and
 * overwritten by the next failing call on the same thread. */
SBM_API const char* sbm_last_error(void);

SBM_API const char* sbm_version(void);

/* ---- closed forms ------------------------------------------------------- */

/* Gaussian transition density p_t(x, y) in dim 1 or 2 (unit diffusion,
 * generator Laplacian/2). x and y point to dim doubles. */
SBM_API sbm_status sbm_heat_kernel(double t, const double* x, const double* y, int dim,
                           double* out);

/* Solution of v' = v^gamma from level a >= 0:
 * (a^{1-gamma} + t (1-gamma))^{1/(1-gamma)}, t >= 0, gamma in (0,1). */
SBM_API sbm_status sbm_constant_solution(double a, double t, double gamma_, double* out);

/* P(T <= t) for the explosion time of total initial mass m > 0. */
SBM_API sbm_status sbm_explosion_cdf(double mass, double gamma_, double t, double* out);

/* Quantile transform: maps u in (0,1) to the time t with P(T > t) = u, so
 * feeding uniform variates yields exact samples of T. */
SBM_API sbm_status sbm_explosion_sample(double mass, double gamma_, double u, double* out);

/* E(exp(-a <X_t, 1>); t < T) for constant level a >= 0; a = 0 gives P(T > t). */
SBM_API sbm_status sbm_survival_laplace(double a, double mass, double gamma_, double t,
                                double* out);

/* ---- experiments -------------------------------------------------------- */

typedef struct sbm_experiment sbm_experiment;

/* Parse an INI configuration from a file or from memory. On success *out owns
 * a validated experiment; on failure *out is NULL. origin labels parse errors
 * (may be NULL). */
SBM_API sbm_status sbm_experiment_load(const char* path, sbm_experiment** out);
SBM_API sbm_status sbm_experiment_parse(const char* text, const char* origin,
                                sbm_experiment** out);
SBM_API void sbm_experiment_free(sbm_experiment* e);

/* Replace the simulation seed (affects all seed-derived streams). */
SBM_API sbm_status sbm_experiment_set_seed(sbm_experiment* e, uint64_t seed);

/* Canonical round-trippable form of the configuration. Writes up to cap bytes
 * including the terminator; *needed (optional) receives the full length
 * excluding the terminator. Call with buf == NULL to size the buffer. */
SBM_API sbm_status sbm_experiment_describe(const sbm_experiment* e, char* buf, size_t cap,
                                   size_t* needed);

typedef struct sbm_run_options {
    const char* out_dir; /* NULL: config [outputs] directory, then $SBM_OUT_DIR, then "out" */
    int threads;         /* <= 0: one worker per hardware thread (capped at 16) */
    const char* format;  /* NULL keeps the config; else comma list from csv,json */
    int quiet;           /* nonzero silences progress and summary */
} sbm_run_options;

/* Runners compute first and write afterwards, so a failed run leaves no
 * partial files. opt may be NULL for defaults. Numbers in every output file
 * carry 17 significant digits, and each file embeds the canonical
 * configuration together with its hash. */
SBM_API sbm_status sbm_run_solve(sbm_experiment* e, const sbm_run_options* opt);
SBM_API sbm_status sbm_run_simulate(sbm_experiment* e, const sbm_run_options* opt);
SBM_API sbm_status sbm_run_explosion(sbm_experiment* e, const sbm_run_options* opt);
SBM_API sbm_status sbm_run_density(sbm_experiment* e, const sbm_run_options* opt);

/* Runs the acceptance criteria; SBM_CRITERION_FAILED if any fails. */
SBM_API sbm_status sbm_run_validate(sbm_experiment* e, const sbm_run_options* opt);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SBM_H */
