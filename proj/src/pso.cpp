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

#include "pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rng.hpp"

namespace noma {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

PsoResult pso_maximize(const std::function<double(double)>& objective,
                       const PsoConfig& cfg) {
  if (cfg.n_particles < 2)
    throw std::invalid_argument("pso: n_particles must be >= 2");
  if (!(cfg.lower < cfg.upper))
    throw std::invalid_argument("pso: bounds must satisfy lower < upper");

  RngStream rng(cfg.seed, 0);
  PsoResult res;
  res.best_objective = kNegInf;

  auto fitness = [&](double x) -> double {
    try {
      const double v = objective(x);
      return std::isnan(v) ? kNegInf : v;
    } catch (const std::exception&) {
      ++res.n_failed_evals;
      return kNegInf;
    }
  };

  const int np = cfg.n_particles;
  std::vector<double> pos(np), vel(np, 0.0), best_pos(np), best_cost(np);
  for (int i = 0; i < np; ++i) {
    pos[i] = cfg.lower + (cfg.upper - cfg.lower) * rng.next_double();
    best_pos[i] = pos[i];
    best_cost[i] = fitness(pos[i]);
    if (best_cost[i] > res.best_objective) {
      res.best_objective = best_cost[i];
      res.best_alpha = pos[i];
    }
  }
  res.trace.push_back(res.best_objective);

  for (int it = 0; it < cfg.n_iterations; ++it) {
    for (int i = 0; i < np; ++i) {
      const double u1 = rng.next_double();
      const double u2 = rng.next_double();
      vel[i] += cfg.accel_personal * u1 * (best_pos[i] - pos[i]) +
                cfg.accel_global * u2 * (res.best_alpha - pos[i]);
      if (cfg.clamp_velocity) {
        vel[i] = std::clamp(vel[i], -cfg.velocity_limit, cfg.velocity_limit);
      }
      pos[i] += vel[i];
      pos[i] = std::max(pos[i], cfg.lower);
      pos[i] = std::min(pos[i], cfg.upper);
      const double f = fitness(pos[i]);
      if (f > best_cost[i]) {
        best_cost[i] = f;
        best_pos[i] = pos[i];
      }
      if (f > res.best_objective) {
        res.best_objective = f;
        res.best_alpha = pos[i];
      }
    }
    res.trace.push_back(res.best_objective);
  }
  return res;
}

std::function<double(double)> make_throughput_objective(
    const SystemParams& p, ObjectiveBackend backend, CsiMode csi,
    const McConfig& mc_cfg) {
  return [p, backend, csi, mc_cfg](double alpha) -> double {
    SystemParams q = p;
    // Both box edges drive the throughput to its correct limit of zero
    // (alpha -> 0: nothing harvested; alpha -> 1: thresholds diverge), so a
    // clamp into the open interval evaluates them faithfully.
    q.alpha = std::clamp(alpha, 1e-9, 1.0 - 1e-9);
    if (backend == ObjectiveBackend::analytic) {
      return throughput_analytic(q, csi);
    }
    const SystemParams qe = (csi == CsiMode::perfect) ? q.perfect() : q;
    const DerivedThresholds t = derive_thresholds(qe);
    return mc_throughput(qe, t, mc_cfg).mean;
  };
}

PsoResult pso_optimize_alpha(const SystemParams& p, ObjectiveBackend backend,
                             CsiMode csi, const PsoConfig& cfg,
                             const McConfig& mc_cfg) {
  return pso_maximize(make_throughput_objective(p, backend, csi, mc_cfg), cfg);
}

}  // namespace noma
