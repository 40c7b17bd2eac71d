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
#include <utility>

#include "params.hpp"
#include "rng.hpp"

namespace noma {

struct McConfig {
  std::uint64_t n_trials = 1000000;
  std::uint64_t seed = 1;
  // Trials are accumulated in fixed blocks reduced in block order, so the
  // floating-point result is identical for any worker count.
  std::uint32_t batch_size = 16384;
  double confidence_level = 0.99;
  int n_workers = 0;  // 0: hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // CI half-width at confidence_level
  std::uint64_t n = 0;
};

/// Two-sided normal quantile for the given central confidence level.
double normal_quantile_two_sided(double confidence_level);

/// Proportion estimate (Wilson half-width) of a boolean trial.
McEstimate mc_proportion(const McConfig& cfg,
                         const std::function<bool(RngStream&)>& trial);

/// Empirical outage frequencies of both users.
std::pair<McEstimate, McEstimate> mc_outage(const SystemParams& p,
                                            const DerivedThresholds& t,
                                            const McConfig& cfg);

/// Trial-mean ergodic rates of both users.
std::pair<McEstimate, McEstimate> mc_rates(const SystemParams& p,
                                           const McConfig& cfg);

/// Delay-limited throughput derived from mc_outage; CI propagated linearly.
McEstimate mc_throughput(const SystemParams& p, const DerivedThresholds& t,
                         const McConfig& cfg);

}  // namespace noma
