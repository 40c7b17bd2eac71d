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

#include "nomarelay/nomarelay.h"

#include <cmath>
#include <cstring>
#include <string>

#include "mc.hpp"
#include "outage.hpp"
#include "params.hpp"
#include "pso.hpp"
#include "rate.hpp"
#include "specfun.hpp"
#include "sweep.hpp"

struct noma_params {
  noma::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

int fail(int status, const std::string& msg) {
  set_error(msg);
  return status;
}

noma::CsiMode to_csi(noma_csi c) {
  return c == NOMA_CSI_PERFECT ? noma::CsiMode::perfect
                               : noma::CsiMode::imperfect;
}

// Projects the handle's parameters for evaluation and validates them.
int checked_params(const noma_params* p, noma_csi csi, noma::SystemParams& out) {
  if (!p) return fail(NOMA_ERR_CONFIG, "null params handle");
  const auto errs = noma::validate(p->cfg.params);
  if (!errs.empty()) return fail(NOMA_ERR_CONFIG, errs.front());
  out = (csi == NOMA_CSI_PERFECT) ? p->cfg.params.perfect() : p->cfg.params;
  return NOMA_OK;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const noma::specfun::QuadratureError& e) {
    return fail(NOMA_ERR_NUMERIC, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(NOMA_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(NOMA_ERR_NUMERIC, e.what());
  }
}

noma::McConfig mc_config(const noma_params* p) {
  noma::McConfig mc;
  mc.n_trials = p->cfg.n_trials;
  mc.seed = p->cfg.seed;
  return mc;
}

void copy_estimate(const noma::McEstimate& in, noma_estimate* out) {
  if (!out) return;
  out->mean = in.mean;
  out->half_width = in.half_width;
  out->n = in.n;
}

}  // namespace

extern "C" {

const char* noma_version(void) { return "1.0.0"; }

const char* noma_last_error(void) { return g_last_error.c_str(); }

noma_params* noma_params_create(void) { return new (std::nothrow) noma_params(); }

noma_params* noma_params_load(const char* path) {
  if (!path) {
    set_error("null config path");
    return nullptr;
  }
  auto* p = new (std::nothrow) noma_params();
  if (!p) return nullptr;
  std::vector<std::string> errors;
  if (!noma::load_config_file(path, p->cfg, errors)) {
    std::string joined;
    for (const auto& e : errors) {
      if (!joined.empty()) joined += "; ";
      joined += e;
    }
    set_error(joined);
    delete p;
    return nullptr;
  }
  return p;
}

int noma_params_set(noma_params* p, const char* key, const char* value) {
  if (!p || !key || !value) return fail(NOMA_ERR_CONFIG, "null argument");
  const std::string err = noma::set_config_value(p->cfg, key, value);
  if (!err.empty()) return fail(NOMA_ERR_CONFIG, err);
  return NOMA_OK;
}

double noma_params_get(const noma_params* p, const char* key) {
  if (!p || !key) return std::nan("");
  return noma::get_config_value(p->cfg, key);
}

int noma_params_validate(const noma_params* p) {
  if (!p) return fail(NOMA_ERR_CONFIG, "null params handle");
  const auto errs = noma::validate(p->cfg.params);
  if (errs.empty()) return NOMA_OK;
  std::string joined;
  for (const auto& e : errs) {
    if (!joined.empty()) joined += "; ";
    joined += e;
  }
  return fail(NOMA_ERR_CONFIG, joined);
}

void noma_params_free(noma_params* p) { delete p; }

int noma_outage_analytic(const noma_params* p, noma_csi csi, noma_user user,
                         double* out) {
  if (!out) return fail(NOMA_ERR_CONFIG, "null output pointer");
  noma::SystemParams sp;
  if (int rc = checked_params(p, csi, sp)) return rc;
  return guarded([&]() {
    if (csi == NOMA_CSI_PERFECT) {
      *out = (user == NOMA_USER_1) ? noma::outage_u1_perfect(sp)
                                   : noma::outage_u2_perfect(sp);
    } else {
      const auto t = noma::derive_thresholds(sp);
      *out = (user == NOMA_USER_1) ? noma::outage_u1_icsi(sp, t)
                                   : noma::outage_u2_icsi(sp, t);
    }
    return NOMA_OK;
  });
}

int noma_outage_asymptotic(const noma_params* p, noma_csi csi, noma_user user,
                           double* out) {
  if (!out) return fail(NOMA_ERR_CONFIG, "null output pointer");
  noma::SystemParams sp;
  if (int rc = checked_params(p, csi, sp)) return rc;
  return guarded([&]() {
    noma::AsyKind kind;
    if (csi == NOMA_CSI_PERFECT)
      kind = (user == NOMA_USER_1) ? noma::AsyKind::u1_perfect
                                   : noma::AsyKind::u2_perfect;
    else
      kind = (user == NOMA_USER_1) ? noma::AsyKind::u1_icsi
                                   : noma::AsyKind::u2_icsi;
    *out = noma::outage_asymptotic(sp, kind);
    return NOMA_OK;
  });
}

int noma_rate_analytic(const noma_params* p, noma_csi csi, noma_user user,
                       double* out) {
  if (!out) return fail(NOMA_ERR_CONFIG, "null output pointer");
  noma::SystemParams sp;
  if (int rc = checked_params(p, csi, sp)) return rc;
  return guarded([&]() {
    if (csi == NOMA_CSI_PERFECT) {
      *out = noma::ergodic_rate_perfect(
          sp, user == NOMA_USER_1 ? noma::User::u1 : noma::User::u2);
    } else {
      *out = (user == NOMA_USER_1) ? noma::ergodic_rate_u1_icsi(sp)
                                   : noma::ergodic_rate_u2_icsi(sp);
    }
    return NOMA_OK;
  });
}

int noma_throughput_analytic(const noma_params* p, noma_csi csi, double* out) {
  if (!out) return fail(NOMA_ERR_CONFIG, "null output pointer");
  noma::SystemParams sp;
  if (int rc = checked_params(p, csi, sp)) return rc;
  return guarded([&]() {
    *out = noma::throughput_analytic(sp, to_csi(csi));
    return NOMA_OK;
  });
}

int noma_mc_outage(const noma_params* p, noma_csi csi, noma_estimate* u1,
                   noma_estimate* u2) {
  noma::SystemParams sp;
  if (int rc = checked_params(p, csi, sp)) return rc;
  return guarded([&]() {
    const auto t = noma::derive_thresholds(sp);
    const auto [a, b] = noma::mc_outage(sp, t, mc_config(p));
    copy_estimate(a, u1);
    copy_estimate(b, u2);
    return NOMA_OK;
  });
}

int noma_mc_rates(const noma_params* p, noma_csi csi, noma_estimate* r1,
                  noma_estimate* r2) {
  noma::SystemParams sp;
  if (int rc = checked_params(p, csi, sp)) return rc;
  return guarded([&]() {
    const auto [a, b] = noma::mc_rates(sp, mc_config(p));
    copy_estimate(a, r1);
    copy_estimate(b, r2);
    return NOMA_OK;
  });
}

int noma_mc_throughput(const noma_params* p, noma_csi csi, noma_estimate* out) {
  noma::SystemParams sp;
  if (int rc = checked_params(p, csi, sp)) return rc;
  return guarded([&]() {
    const auto t = noma::derive_thresholds(sp);
    copy_estimate(noma::mc_throughput(sp, t, mc_config(p)), out);
    return NOMA_OK;
  });
}

int noma_optimize_alpha(const noma_params* p, noma_backend backend,
                        noma_csi csi, int n_particles, int n_iterations,
                        uint64_t pso_seed, int clamp_velocity,
                        noma_pso_summary* out, double* trace, size_t trace_cap,
                        size_t* trace_len) {
  if (!out) return fail(NOMA_ERR_CONFIG, "null output pointer");
  if (!p) return fail(NOMA_ERR_CONFIG, "null params handle");
  const auto errs = noma::validate(p->cfg.params);
  if (!errs.empty()) return fail(NOMA_ERR_CONFIG, errs.front());
  return guarded([&]() {
    noma::PsoConfig cfg;
    cfg.n_particles = n_particles;
    cfg.n_iterations = n_iterations;
    cfg.seed = pso_seed;
    cfg.clamp_velocity = clamp_velocity != 0;
    const noma::PsoResult r = noma::pso_optimize_alpha(
        p->cfg.params,
        backend == NOMA_BACKEND_MONTECARLO ? noma::ObjectiveBackend::montecarlo
                                           : noma::ObjectiveBackend::analytic,
        to_csi(csi), cfg, mc_config(p));
    out->best_alpha = r.best_alpha;
    out->best_objective = r.best_objective;
    out->n_failed_evals = r.n_failed_evals;
    if (trace && trace_len) {
      const size_t n = std::min(trace_cap, r.trace.size());
      std::memcpy(trace, r.trace.data(), n * sizeof(double));
      *trace_len = n;
    } else if (trace_len) {
      *trace_len = 0;
    }
    return NOMA_OK;
  });
}

int noma_run_sweep(const noma_params* p, const noma_sweep_spec* spec,
                   const char* out_path) {
  if (!p || !spec || !out_path) return fail(NOMA_ERR_CONFIG, "null argument");
  if (!spec->variable || !spec->grid || !spec->quantities || !spec->mode ||
      !spec->csi)
    return fail(NOMA_ERR_CONFIG, "incomplete sweep spec");
  noma::SweepSpec s;
  std::string err;
  if (!noma::parse_sweep_var(spec->variable, s.var))
    return fail(NOMA_ERR_CONFIG, std::string("unknown sweep variable: ") + spec->variable);
  if (!noma::parse_run_mode(spec->mode, s.mode))
    return fail(NOMA_ERR_CONFIG, std::string("unknown mode: ") + spec->mode);
  if (!noma::parse_csi(spec->csi, s.csi))
    return fail(NOMA_ERR_CONFIG, std::string("unknown csi mode: ") + spec->csi);
  if (!noma::parse_quantities(spec->quantities, s.quantities, err))
    return fail(NOMA_ERR_CONFIG, err);
  s.grid.assign(spec->grid, spec->grid + spec->grid_len);
  const int rc = noma::run_sweep(p->cfg, s, out_path, err);
  if (rc != noma::kOk) return fail(rc, err);
  return NOMA_OK;
}

int noma_run_validate(const noma_params* p, noma_csi csi,
                      const double* rho_db_grid, size_t grid_len,
                      double omega2_scale, const char* out_path) {
  if (!p || !rho_db_grid || !out_path)
    return fail(NOMA_ERR_CONFIG, "null argument");
  std::vector<double> grid(rho_db_grid, rho_db_grid + grid_len);
  std::string err;
  const int rc = noma::run_validate(p->cfg, to_csi(csi), grid, omega2_scale,
                                    out_path, err);
  if (rc != noma::kOk) return fail(rc, err);
  if (!err.empty()) set_error(err);  // CI-width warning with OK status
  return NOMA_OK;
}

int noma_run_optimize(const noma_params* p, noma_backend backend, noma_csi csi,
                      uint64_t pso_seed, const char* out_path,
                      noma_pso_summary* out) {
  if (!p || !out_path) return fail(NOMA_ERR_CONFIG, "null argument");
  noma::PsoConfig cfg;
  cfg.seed = pso_seed;
  std::string err;
  noma::PsoResult r;
  const int rc = noma::run_optimize(
      p->cfg,
      backend == NOMA_BACKEND_MONTECARLO ? noma::ObjectiveBackend::montecarlo
                                         : noma::ObjectiveBackend::analytic,
      to_csi(csi), cfg, out_path, err, &r);
  if (rc != noma::kOk) return fail(rc, err);
  if (out) {
    out->best_alpha = r.best_alpha;
    out->best_objective = r.best_objective;
    out->n_failed_evals = r.n_failed_evals;
  }
  return NOMA_OK;
}

}  // extern "C"
