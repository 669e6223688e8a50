/* Copyright 2026 The biot-semiexplicit Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the Biot poroelasticity solver and experiment drivers.
 *
 * All functions return a biot_status. On failure a message describing the
 * last error on the calling thread is available from biot_last_error().
 * Handles are opaque and must be released with the matching *_free call;
 * passing NULL to a *_free function is a no-op.
 */
#ifndef BIOT_BIOT_H_
#define BIOT_BIOT_H_

#include <stddef.h>

#if defined(_WIN32)
#define BIOT_API __declspec(dllexport)
#else
#define BIOT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum biot_status {
  BIOT_OK = 0,
  BIOT_INVALID_ARGUMENT = 1,
  BIOT_CONFIG_ERROR = 2,
  BIOT_SOLVER_ERROR = 3,
  BIOT_IO_ERROR = 4,
  BIOT_INTERNAL_ERROR = 5,
  BIOT_NOT_AVAILABLE = 6
} biot_status;

typedef enum biot_scheme {
  BIOT_SCHEME_SEMI_EXPLICIT = 0,
  BIOT_SCHEME_IMPLICIT_PICARD = 1,
  BIOT_SCHEME_DELAY_IMPLICIT = 2
} biot_scheme;

typedef struct biot_experiment biot_experiment;
typedef struct biot_results biot_results;
typedef struct biot_simulation biot_simulation;

BIOT_API const char* biot_version(void);
BIOT_API const char* biot_last_error(void);
BIOT_API const char* biot_status_name(biot_status status);

/* ---- experiment configs ------------------------------------------------ */

BIOT_API biot_status biot_experiment_parse(const char* json, biot_experiment** out);
BIOT_API biot_status biot_experiment_load(const char* path, biot_experiment** out);
BIOT_API void biot_experiment_free(biot_experiment* experiment);

/* Overrides the config's output directory / worker count. */
BIOT_API biot_status biot_experiment_set_output_dir(biot_experiment* experiment, const char* dir);
BIOT_API biot_status biot_experiment_set_workers(biot_experiment* experiment, int workers);
BIOT_API biot_status biot_experiment_output_dir(const biot_experiment* experiment,
                                                const char** dir);

/* command: "run", "convergence", "sweep-alpha" or "compare". Solver failures
 * of individual rows do not fail the call; see biot_results_failure_count. */
BIOT_API biot_status biot_experiment_execute(const biot_experiment* experiment,
                                             const char* command, biot_results** out);

/* ---- results ----------------------------------------------------------- */

BIOT_API void biot_results_free(biot_results* results);
BIOT_API size_t biot_results_row_count(const biot_results* results);
BIOT_API size_t biot_results_column_count(void);
BIOT_API const char* biot_results_column_name(size_t column);
/* Numeric cell. BIOT_NOT_AVAILABLE for empty cells and for the scheme column. */
BIOT_API biot_status biot_results_value(const biot_results* results, size_t row,
                                        const char* column, double* value);
/* Cell as it appears in the CSV. The pointer is valid until the handle is freed. */
BIOT_API biot_status biot_results_text(const biot_results* results, size_t row,
                                       const char* column, const char** text);
BIOT_API biot_status biot_results_csv(const biot_results* results, const char** csv);
BIOT_API size_t biot_results_summary_count(const biot_results* results);
BIOT_API const char* biot_results_summary_line(const biot_results* results, size_t index);
BIOT_API size_t biot_results_failure_count(const biot_results* results);
BIOT_API biot_status biot_results_write(const biot_results* results, const char* dir);

/* ---- single simulations ------------------------------------------------ */

/* experiment: "ex41", "ex42", "ex43" (alpha used) or "zero". */
BIOT_API biot_status biot_simulation_create(const char* experiment, double alpha, int n,
                                            biot_simulation** out);
BIOT_API void biot_simulation_free(biot_simulation* simulation);
BIOT_API biot_status biot_simulation_run(biot_simulation* simulation, biot_scheme scheme,
                                         double tau, double final_time, int picard_max,
                                         double picard_tol);
BIOT_API biot_status biot_simulation_sizes(const biot_simulation* simulation,
                                           size_t* displacement_size, size_t* pressure_size,
                                           size_t* state_count);
/* Copies state `index` (0 = initial) into caller buffers of the sizes above. */
BIOT_API biot_status biot_simulation_state(const biot_simulation* simulation, size_t index,
                                           double* u, double* p, double* t);
BIOT_API biot_status biot_simulation_wall_time(const biot_simulation* simulation,
                                               double* seconds);
BIOT_API biot_status biot_simulation_write_snapshot(const biot_simulation* simulation,
                                                    size_t index, const char* path);

/* ---- diagnostics ------------------------------------------------------- */

BIOT_API biot_status biot_coupling_diagnostic(double alpha, double M, double mu, double* ratio,
                                              int* satisfied);

#ifdef __cplusplus
}
#endif

#endif /* BIOT_BIOT_H_ */
