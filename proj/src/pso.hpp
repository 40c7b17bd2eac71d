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

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mc.hpp"
#include "outage.hpp"
#include "params.hpp"

namespace noma {

struct PsoConfig {
  int n_particles = 30;
  int n_iterations = 20;
  double accel_personal = 2.0;
  double accel_global = 2.0;
  double lower = 0.0;
  double upper = 1.0;
  std::uint64_t seed = 1;
  // The verbatim velocity update carries no inertia weight and can
  // oscillate; the clamp bounds |v| and is switched off for strict
  // reproduction of the unmodified update.
  bool clamp_velocity = true;
  double velocity_limit = 0.5;
};

struct PsoResult {
  double best_alpha = 0.0;
  double best_objective = 0.0;
  std::vector<double> trace;  // best objective after init and each iteration
  int n_failed_evals = 0;     // objective failures treated as -inf fitness
};

/// Maximises a scalar objective on [lower, upper] with the fixed-parameter
/// particle swarm (zero initial velocity, personal/global pulls of weight 2,
/// positions clamped to the bounds).
PsoResult pso_maximize(const std::function<double(double)>& objective,
                       const PsoConfig& cfg);

enum class ObjectiveBackend { analytic, montecarlo };

/// Throughput objective in the harvesting fraction alpha; remaining system
/// parameters are taken from `p` (its alpha field is the decision variable
/// and is ignored).
std::function<double(double)> make_throughput_objective(
    const SystemParams& p, ObjectiveBackend backend, CsiMode csi,
    const McConfig& mc_cfg);

PsoResult pso_optimize_alpha(const SystemParams& p, ObjectiveBackend backend,
                             CsiMode csi, const PsoConfig& cfg,
                             const McConfig& mc_cfg = {});

}  // namespace noma
