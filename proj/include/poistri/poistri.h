/* C interface to the poistri library: samplers, density catalog, moment
 * tables, the verification suite and SVG plots.
 *
 * Every fallible call returns a poistri_status. On failure a message is kept
 * per thread and read back with poistri_last_error(). Handles are opaque and
 * released by their matching *_free function; freeing NULL is a no-op.
 * Text results are owned by a poistri_text handle. */
#ifndef POISTRI_H
#define POISTRI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define POISTRI_API __declspec(dllexport)
#else
#define POISTRI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum poistri_status {
  POISTRI_OK = 0,
  POISTRI_ERR_ARGUMENT = 1,  /* bad input: unknown tag, invalid size or option */
  POISTRI_ERR_DOMAIN = 2,    /* input outside an operation's domain */
  POISTRI_ERR_NUMERIC = 3,   /* quadrature did not converge or integrand failed */
  POISTRI_ERR_DIVERGENT = 4, /* the requested moment is infinite */
  POISTRI_ERR_IO = 5,        /* a file could not be written */
  POISTRI_ERR_MEMORY = 6,
  POISTRI_ERR_INTERNAL = 7
} poistri_status;

typedef enum poistri_format { POISTRI_FORMAT_CSV = 0, POISTRI_FORMAT_JSON = 1 } poistri_format;

typedef struct poistri_config poistri_config;
typedef struct poistri_samples poistri_samples;
typedef struct poistri_report poistri_report;
typedef struct poistri_text poistri_text;

POISTRI_API const char* poistri_version(void);
POISTRI_API const char* poistri_status_name(poistri_status status);
/* Message of the last failed call on this thread, "" if none. */
POISTRI_API const char* poistri_last_error(void);

/* ---- text results ---- */
POISTRI_API const char* poistri_text_data(const poistri_text* text);
POISTRI_API size_t poistri_text_size(const poistri_text* text);
POISTRI_API void poistri_text_free(poistri_text* text);

/* ---- run configuration ----
 * Defaults: seed 20171221, 1 worker, CSV, n = 1000000, alpha 0.001,
 * tol 1e-10, verify sample sizes 1e6 / 1e7 / 1e5. */
POISTRI_API poistri_status poistri_config_new(poistri_config** out);
POISTRI_API void poistri_config_free(poistri_config* config);
POISTRI_API poistri_status poistri_config_set_seed(poistri_config* config, uint64_t seed);
POISTRI_API poistri_status poistri_config_set_workers(poistri_config* config, unsigned workers);
POISTRI_API poistri_status poistri_config_set_format(poistri_config* config, poistri_format format);
/* Accepts "csv" or "json". */
POISTRI_API poistri_status poistri_config_set_format_name(poistri_config* config, const char* name);
/* Monte Carlo sample size for moment tables. */
POISTRI_API poistri_status poistri_config_set_sample_size(poistri_config* config, size_t n);
POISTRI_API poistri_status poistri_config_set_alpha(poistri_config* config, double alpha);
POISTRI_API poistri_status poistri_config_set_tol(poistri_config* config, double tol);
/* Sample sizes of the verification suite: moments/acuteness/correlation, E(ac), KS tests. */
POISTRI_API poistri_status poistri_config_set_verify_sizes(poistri_config* config, size_t n_moments, size_t n_ac,
                                                           size_t n_ks);
/* Restrict verification to the listed criteria (1..11); count 0 restores all. */
POISTRI_API poistri_status poistri_config_set_criteria(poistri_config* config, const int* criteria, size_t count);
/* Test hook: the named check gets a wrong expected constant. NULL or "" clears it. */
POISTRI_API poistri_status poistri_config_set_inject_fault(poistri_config* config, const char* check);
/* Called with the criterion number as each verification stage starts. */
typedef void (*poistri_progress_fn)(int criterion, void* user);
POISTRI_API poistri_status poistri_config_set_progress(poistri_config* config, poistri_progress_fn fn, void* user);

/* ---- sampling ----
 * Families: "pinned", "staked", "anchored", "uniformT". */
POISTRI_API poistri_status poistri_sample(const poistri_config* config, const char* family, size_t n,
                                          poistri_samples** out);
POISTRI_API size_t poistri_samples_count(const poistri_samples* samples);
/* ax, ay, bx, by, cx, cy, a, b, c, alpha, beta, gamma */
POISTRI_API poistri_status poistri_samples_row(const poistri_samples* samples, size_t index, double row[12]);
POISTRI_API poistri_status poistri_samples_render(const poistri_samples* samples, poistri_format format,
                                                  poistri_text** out);
POISTRI_API void poistri_samples_free(poistri_samples* samples);
/* Draws n samples straight to `path` ("-" for stdout) in the configured format,
 * a block at a time. Same rows as poistri_sample with the same configuration. */
POISTRI_API poistri_status poistri_sample_write(const poistri_config* config, const char* family, size_t n,
                                                const char* path);

/* ---- density catalog ---- */
POISTRI_API size_t poistri_density_kind_count(void);
/* NULL when index is out of range. */
POISTRI_API const char* poistri_density_kind_name(size_t index);
POISTRI_API poistri_status poistri_density_support(const char* kind, int* dimension, double* lower, double* upper);
/* *singular is set to 1 at an integrable singularity, where *value is +inf. */
POISTRI_API poistri_status poistri_pdf(const char* kind, const double* args, size_t nargs, double tol, double* value,
                                       int* singular);
/* Number with an optional multiple of pi: "0.5", "pi", "-pi/2", "3pi/4". */
POISTRI_API poistri_status poistri_parse_number(const char* text, double* value);
/* Table at `rows` points stored row-major (rows x dimension). */
POISTRI_API poistri_status poistri_pdf_table(const poistri_config* config, const char* kind, const double* points,
                                             size_t rows, poistri_text** out);
/* Table on the product of start:stop:count grids, one per coordinate. */
POISTRI_API poistri_status poistri_pdf_grid_table(const poistri_config* config, const char* kind,
                                                  const char* const* grids, size_t ngrids, poistri_text** out);

/* ---- moments ---- */
/* Closed form, quadrature and Monte Carlo for every cell of the family's table. *all_pass may be NULL. */
POISTRI_API poistri_status poistri_moments_table(const poistri_config* config, const char* family,
                                                 poistri_text** out, int* all_pass);
/* Reference moment tables for pinned, staked and anchored (closed forms and decimals only). */
POISTRI_API poistri_status poistri_reference_tables(const poistri_config* config, poistri_text** out);

/* ---- verification ---- */
POISTRI_API poistri_status poistri_verify(const poistri_config* config, poistri_report** out);
POISTRI_API void poistri_report_free(poistri_report* report);
POISTRI_API int poistri_report_passed(const poistri_report* report);
POISTRI_API size_t poistri_report_count(const poistri_report* report);

typedef struct poistri_check_view {
  const char* name;
  int criterion;
  const char* family;
  int expected_is_text;
  double expected;           /* valid when expected_is_text == 0 */
  const char* expected_text; /* valid when expected_is_text == 1 */
  double actual;
  double tolerance;
  int pass;
} poistri_check_view;

/* Pointers in the view stay valid until the report is freed. */
POISTRI_API poistri_status poistri_report_check(const poistri_report* report, size_t index, poistri_check_view* out);
/* Report in the configured format (JSON or CSV). */
POISTRI_API poistri_status poistri_report_render(const poistri_report* report, poistri_text** out);

/* ---- plots ---- */
/* SVG histogram of n draws against the catalog density. bins 0 picks the
 * bin count automatically; NaN x_min / x_max pick the default range. */
POISTRI_API poistri_status poistri_plot_svg(const poistri_config* config, const char* kind, size_t n, int bins,
                                            double x_min, double x_max, poistri_text** out);

#ifdef __cplusplus
}
#endif

#endif /* POISTRI_H */
