// Copyright 2026 The zdrd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the zdrd library.
 *
 * Objects are opaque handles created by *_new / *_from_* functions and
 * released by the matching *_free function (NULL is accepted). Every
 * fallible call returns a zdrd_status; on failure zdrd_last_error() holds a
 * message for the calling thread. Strings returned through char** must be
 * released with zdrd_string_free. Matrices are passed row-major.
 */
#ifndef ZDRD_ZDRD_H_
#define ZDRD_ZDRD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ZDRD_BUILDING_LIBRARY)
#define ZDRD_API __attribute__((visibility("default")))
#else
#define ZDRD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zdrd_status {
  ZDRD_OK = 0,
  ZDRD_ERR_DIMENSION_MISMATCH = 1,
  ZDRD_ERR_NOT_PSD = 2,
  ZDRD_ERR_NOT_PD = 3,
  ZDRD_ERR_EIGEN_FAILURE = 4,
  ZDRD_ERR_INFEASIBLE_MODEL = 5,
  ZDRD_ERR_SOLVER_DIVERGENCE = 6,
  ZDRD_ERR_BAD_DISTORTION = 7,
  ZDRD_ERR_ORDER_VIOLATION = 8,
  ZDRD_ERR_ALPHABET_OVERFLOW = 9,
  ZDRD_ERR_CONFIG_PARSE = 10,
  ZDRD_ERR_INVALID_ARGUMENT = 11,
  ZDRD_ERR_NULL_ARGUMENT = 12,
  ZDRD_ERR_INTERNAL = 13
} zdrd_status;

typedef enum zdrd_form {
  ZDRD_FORM_AUTO = 0,
  ZDRD_FORM_B = 1,
  ZDRD_FORM_A = 2,
  ZDRD_FORM_SCALAR = 3
} zdrd_form;

typedef enum zdrd_quantizer {
  ZDRD_QUANTIZER_NONE = 0,
  ZDRD_QUANTIZER_SDUSQ = 1,
  ZDRD_QUANTIZER_D4 = 2
} zdrd_quantizer;

typedef struct zdrd_source zdrd_source;
typedef struct zdrd_solution zdrd_solution;
typedef struct zdrd_scheme zdrd_scheme;
typedef struct zdrd_config zdrd_config;
typedef struct zdrd_report zdrd_report;

typedef struct zdrd_coding_result {
  double rate_bits;
  double entropy_bits;
  double mse;
  double rate_std_error;
  int64_t n_steps;
  uint64_t alphabet_size;
  int64_t active_dims;
} zdrd_coding_result;

/* Missing values (e.g. operational rate without a quantizer) are NaN. */
typedef struct zdrd_row {
  double d_target;
  double rate_lower_bits;
  double rate_upper_bits;
  double rate_op_bits;
  double d_empirical;
  int64_t r_active;
  int failed;
} zdrd_row;

ZDRD_API const char* zdrd_version(void);
ZDRD_API const char* zdrd_status_name(zdrd_status status);
/* Message of the last failed call on this thread; empty if none. */
ZDRD_API const char* zdrd_last_error(void);
ZDRD_API void zdrd_string_free(char* s);

/* ---- sources ---- */

/* a: p*p, b: p*q, sigma_x0: p*p or NULL for the identity. */
ZDRD_API zdrd_status zdrd_source_new(const double* a, const double* b, const double* sigma_x0,
                                     size_t p, size_t q, zdrd_source** out);
/* coefficients: s consecutive p*p matrices A_1..A_s; b: p*q. */
ZDRD_API zdrd_status zdrd_source_from_ar(const double* coefficients, size_t s, const double* b,
                                         size_t p, size_t q, zdrd_source** out);
ZDRD_API zdrd_status zdrd_source_from_json(const char* json, zdrd_source** out);
ZDRD_API void zdrd_source_free(zdrd_source* src);
ZDRD_API size_t zdrd_source_state_dim(const zdrd_source* src);
/* +inf for unstable sources. */
ZDRD_API zdrd_status zdrd_source_d_max(const zdrd_source* src, double* out);
ZDRD_API zdrd_status zdrd_source_stability(const zdrd_source* src, int* is_stable,
                                           double* rate_floor_bits);

/* ---- rate-distortion ---- */

ZDRD_API zdrd_status zdrd_scalar_nrdf(double alpha, double sigma2, double distortion,
                                      double* out);
ZDRD_API zdrd_status zdrd_nrdf(const zdrd_source* src, double distortion, zdrd_form form,
                               zdrd_solution** out);
ZDRD_API void zdrd_solution_free(zdrd_solution* sol);
ZDRD_API double zdrd_solution_rate(const zdrd_solution* sol);
ZDRD_API zdrd_form zdrd_solution_form(const zdrd_solution* sol);
/* Writes p*p entries. */
ZDRD_API zdrd_status zdrd_solution_pi(const zdrd_solution* sol, double* out);
ZDRD_API zdrd_status zdrd_solution_lambda(const zdrd_solution* sol, double* out);
ZDRD_API zdrd_status zdrd_solution_to_json(const zdrd_solution* sol, char** out);

/* ---- realization and coding ---- */

ZDRD_API zdrd_status zdrd_scheme_new(const zdrd_source* src, const zdrd_solution* sol,
                                     zdrd_scheme** out);
ZDRD_API void zdrd_scheme_free(zdrd_scheme* scheme);
ZDRD_API size_t zdrd_scheme_active_dims(const zdrd_scheme* scheme);
ZDRD_API zdrd_status zdrd_scheme_to_json(const zdrd_scheme* scheme, char** out);

/* Empirical MSE of n steps of the Gaussian-channel realization. */
ZDRD_API zdrd_status zdrd_awgn_mse(const zdrd_source* src, const zdrd_scheme* scheme, int64_t n,
                                   uint64_t source_seed, uint64_t channel_seed, double* out);
ZDRD_API zdrd_status zdrd_coding_run(const zdrd_source* src, const zdrd_scheme* scheme,
                                     int64_t n, uint64_t source_seed, uint64_t dither_seed,
                                     zdrd_quantizer kind, zdrd_coding_result* out);
ZDRD_API double zdrd_upper_bound(double rate_bits, int64_t active_dims, zdrd_quantizer kind);

/* ---- experiments ---- */

ZDRD_API size_t zdrd_preset_count(void);
/* NULL when index is out of range. The string is static. */
ZDRD_API const char* zdrd_preset_name(size_t index);

ZDRD_API zdrd_status zdrd_config_from_preset(const char* name, zdrd_config** out);
ZDRD_API zdrd_status zdrd_config_from_json(const char* json, zdrd_config** out);
ZDRD_API void zdrd_config_free(zdrd_config* cfg);
ZDRD_API zdrd_status zdrd_config_set_quantizer(zdrd_config* cfg, zdrd_quantizer kind);
ZDRD_API zdrd_status zdrd_config_set_per_dim(zdrd_config* cfg, int per_dim);
ZDRD_API zdrd_status zdrd_config_set_n_steps(zdrd_config* cfg, int64_t n_steps);
ZDRD_API zdrd_status zdrd_config_set_threads(zdrd_config* cfg, unsigned threads);
ZDRD_API zdrd_status zdrd_config_set_grid(zdrd_config* cfg, const double* grid, size_t n);
ZDRD_API zdrd_status zdrd_config_set_seeds(zdrd_config* cfg, uint64_t source, uint64_t dither,
                                           uint64_t channel);
/* Applies ZDRD_SEED from the environment if it is set. */
ZDRD_API zdrd_status zdrd_config_apply_seed_env(zdrd_config* cfg);
/* *out is set to NULL when the config names no such output. */
ZDRD_API zdrd_status zdrd_config_csv_path(const zdrd_config* cfg, char** out);
ZDRD_API zdrd_status zdrd_config_json_path(const zdrd_config* cfg, char** out);

ZDRD_API zdrd_status zdrd_run_experiment(const zdrd_config* cfg, zdrd_report** out);
ZDRD_API void zdrd_report_free(zdrd_report* report);
ZDRD_API size_t zdrd_report_row_count(const zdrd_report* report);
ZDRD_API zdrd_status zdrd_report_row(const zdrd_report* report, size_t index, zdrd_row* out);
/* Error text for a failed row; empty string for rows that succeeded. */
ZDRD_API zdrd_status zdrd_report_row_message(const zdrd_report* report, size_t index,
                                             char** out);
ZDRD_API int zdrd_report_any_failed(const zdrd_report* report);
ZDRD_API zdrd_status zdrd_report_csv(const zdrd_report* report, char** out);
ZDRD_API zdrd_status zdrd_report_json(const zdrd_report* report, char** out);

#ifdef __cplusplus
}
#endif

#endif /* ZDRD_ZDRD_H_ */
