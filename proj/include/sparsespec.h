#ifndef SPARSESPEC_H
#define SPARSESPEC_H

/* C interface to the sparse-spectrum toolkit.  All functionality is reached
 * either through ss_run_command (JSON config in, JSON report out) or through
 * the opaque spectrum handle for the core arithmetic entry points.  Strings
 * returned through out-parameters are heap-allocated; release them with
 * ss_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(_WIN64)
#define SPARSESPEC_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SPARSESPEC_API __attribute__((visibility("default")))
#else
#define SPARSESPEC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum ss_status {
    SS_OK = 0,
    SS_ERROR_INPUT = 2,        /* malformed input or arguments */
    SS_ERROR_PRECONDITION = 3, /* mathematical precondition violated */
    SS_ERROR_DIVERGED = 4,     /* solver divergence */
    SS_ERROR_INTERNAL = 5
} ss_status;

SPARSESPEC_API const char* ss_version(void);

/* Run a subcommand: check-condition, synthesize, certify, counterexample,
 * verify-multiplier or scaling-study.  config_json follows the CLI config
 * schema; file side effects named in the config (out/csv/samples) happen
 * during the call.  On success *report_json receives the report.  On failure
 * *error_message (when non-NULL) receives a description. */
SPARSESPEC_API ss_status ss_run_command(const char* command, const char* config_json,
                                        char** report_json, char** error_message);

SPARSESPEC_API void ss_string_free(char* str);

/* Opaque spectrum handle: radii + weights + truncation N.
 * spec_json: {"radii": {...}, "weights": {...}, "N": int, "k_max"?: int} */
typedef struct ss_spectrum ss_spectrum;

SPARSESPEC_API ss_status ss_spectrum_open(const char* spec_json, ss_spectrum** handle,
                                          char** error_message);
SPARSESPEC_API void ss_spectrum_close(ss_spectrum* handle);

/* Window membership of an integer frequency. */
SPARSESPEC_API ss_status ss_spectrum_is_allowed(const ss_spectrum* handle, int64_t n, int* allowed);

/* B_{n_probe} plus the growth flag (B_{2N} >= B_N + 1). */
SPARSESPEC_API ss_status ss_spectrum_condition_value(const ss_spectrum* handle, int64_t n_probe,
                                                     double* value, int* diverging);

/* The lambda grouping sequence; *count receives the full length even when it
 * exceeds capacity. */
SPARSESPEC_API ss_status ss_spectrum_lambda(const ss_spectrum* handle, int64_t* buffer,
                                            size_t capacity, size_t* count);

/* (1/4) sum_{k=2M}^{2N} |a_k| with the separation preconditions checked;
 * a_re/a_im hold a_0..a_{count-1} (a_im may be NULL for real data). */
SPARSESPEC_API ss_status ss_certificate_lower_bound(const ss_spectrum* handle, const double* a_re,
                                                    const double* a_im, size_t count,
                                                    int64_t window_m, int64_t window_n,
                                                    double* lower_bound, char** error_message);

#ifdef __cplusplus
}
#endif

#endif
