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

#include "params.hpp"
#include "rng.hpp"

namespace noma {

/// One fading realisation of the three estimated channel power gains after
/// partial relay selection.
struct ChannelDraw {
  double g_sr;  // best source->relay gain, max over the K relays
  double g_r1;  // selected relay -> U1
  double g_r2;  // selected relay -> U2
};

/// One draw of |h|^2 under Nakagami-m fading: Gamma(shape = m, mean = mean_power).
/// Integer shapes are sampled exactly as a sum of m exponentials.
double sample_gamma_power(int shape, double mean_power, RngStream& rng);

/// Draws the selected source->relay gain (max over K i.i.d. gains) plus the
/// selected relay's two user-link gains. The user links of all relays are
/// i.i.d. and independent of the source->relay gains, so selection induces no
/// bias on them and they are sampled fresh from the common law.
ChannelDraw draw_with_prs(const SystemParams& p, RngStream& rng);

/// Gamma CDF with integer shape m and mean `mean_power` (regularised lower).
double gamma_power_cdf(int m, double mean_power, double x);

/// CDF of the best of K i.i.d. estimated source->relay gains.
double prs_max_cdf(const SystemParams& p, double x);

}  // namespace noma
