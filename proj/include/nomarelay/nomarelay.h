/*
 *   Copyright 2026 the nomarelay authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

/*
 * C interface of the nomarelay toolkit: performance analysis of a downlink
 * cooperative NOMA system with K energy-harvesting decode-and-forward relays
 * over Nakagami-m fading.
 *
 * All functions returning int yield a noma_status; on failure a
 * human-readable message is available from noma_last_error() (thread-local).
 * Handles are opaque; every handle created by this library must be released
 * with its matching *_free call.
 */

#ifndef NOMARELAY_NOMARELAY_H
#define NOMARELAY_NOMARELAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NOMA_API __declspec(dllexport)
#else
#define NOMA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct noma_params noma_params; /* opaque parameter set + run controls */

typedef enum {
  NOMA_OK = 0,
  NOMA_ERR_CONFIG = 2,  /* bad parameters, config file, or request */
  NOMA_ERR_NUMERIC = 3, /* evaluation failed or validation mismatched */
  NOMA_ERR_IO = 4,      /* file could not be opened or written */
} noma_status;

typedef enum { NOMA_CSI_IMPERFECT = 0, NOMA_CSI_PERFECT = 1 } noma_csi;
typedef enum { NOMA_USER_1 = 1, NOMA_USER_2 = 2 } noma_user;
typedef enum { NOMA_BACKEND_ANALYTIC = 0, NOMA_BACKEND_MONTECARLO = 1 } noma_backend;

NOMA_API const char* noma_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
NOMA_API const char* noma_last_error(void);

/* ---- parameters ------------------------------------------------------- */

/* Fresh handle with the default system parameters. Never returns NULL
 * except on allocation failure. */
NOMA_API noma_params* noma_params_create(void);

/* Parses a flat `key = value` file ('#' comments); keys are the system
 * parameter names plus `seed` and `n_trials`. NULL on error. */
NOMA_API noma_params* noma_params_load(const char* path);

/* Assigns one key from its textual value (same keys as the file format). */
NOMA_API int noma_params_set(noma_params* p, const char* key, const char* value);

/* Reads one value back; NaN for unknown keys. */
NOMA_API double noma_params_get(const noma_params* p, const char* key);

/* Checks every invariant of the parameter set. */
NOMA_API int noma_params_validate(const noma_params* p);

NOMA_API void noma_params_free(noma_params* p);

/* ---- point evaluations ------------------------------------------------ */

NOMA_API int noma_outage_analytic(const noma_params* p, noma_csi csi,
                                  noma_user user, double* out);
NOMA_API int noma_outage_asymptotic(const noma_params* p, noma_csi csi,
                                    noma_user user, double* out);
NOMA_API int noma_rate_analytic(const noma_params* p, noma_csi csi,
                                noma_user user, double* out);
NOMA_API int noma_throughput_analytic(const noma_params* p, noma_csi csi,
                                      double* out);

typedef struct {
  double mean;
  double half_width; /* confidence-interval half width (99% by default) */
  uint64_t n;
} noma_estimate;

/* Monte-Carlo estimates; trial count and seed come from the handle
 * (`n_trials`, `seed`). Results are reproducible for a fixed seed
 * independent of threading. */
NOMA_API int noma_mc_outage(const noma_params* p, noma_csi csi,
                            noma_estimate* u1, noma_estimate* u2);
NOMA_API int noma_mc_rates(const noma_params* p, noma_csi csi,
                           noma_estimate* r1, noma_estimate* r2);
NOMA_API int noma_mc_throughput(const noma_params* p, noma_csi csi,
                                noma_estimate* out);

/* ---- optimisation ------------------------------------------------------ */

typedef struct {
  double best_alpha;
  double best_objective;
  int n_failed_evals;
} noma_pso_summary;

/* Particle-swarm search for the throughput-maximising harvesting fraction.
 * `trace` (may be NULL) receives up to trace_cap per-iteration best values;
 * *trace_len reports how many were written. */
NOMA_API int noma_optimize_alpha(const noma_params* p, noma_backend backend,
                                 noma_csi csi, int n_particles,
                                 int n_iterations, uint64_t pso_seed,
                                 int clamp_velocity, noma_pso_summary* out,
                                 double* trace, size_t trace_cap,
                                 size_t* trace_len);

/* ---- file-producing commands ------------------------------------------ */

typedef struct {
  const char* variable;   /* rho_db | alpha | sigma_e2 | K | a1 | beta */
  const double* grid;     /* strictly increasing */
  size_t grid_len;
  const char* quantities; /* comma list of outage_u1, outage_u2,
                             outage_u1_asy, outage_u2_asy, rate_u1, rate_u2,
                             sum_rate, throughput */
  const char* mode;       /* analytic | montecarlo | both */
  const char* csi;        /* imperfect | perfect */
} noma_sweep_spec;

/* Writes one CSV row per grid point; columns are `<quantity>_<mode>` with
 * `<quantity>_mc_ci` companions, full 17-digit precision. */
NOMA_API int noma_run_sweep(const noma_params* p, const noma_sweep_spec* spec,
                            const char* out_path);

/* Compares every analytic quantity against Monte-Carlo on the given
 * transmit-SNR grid (dB) and writes a pass/fail table; returns
 * NOMA_ERR_NUMERIC if any comparison fails. omega2_scale is a validation
 * hook that perturbs only the analytic U1 constants (pass 1.0 normally). */
NOMA_API int noma_run_validate(const noma_params* p, noma_csi csi,
                               const double* rho_db_grid, size_t grid_len,
                               double omega2_scale, const char* out_path);

/* Runs the optimiser and writes the per-iteration trace CSV. */
NOMA_API int noma_run_optimize(const noma_params* p, noma_backend backend,
                               noma_csi csi, uint64_t pso_seed,
                               const char* out_path, noma_pso_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* NOMARELAY_NOMARELAY_H */
