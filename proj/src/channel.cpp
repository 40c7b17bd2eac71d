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

#include "channel.hpp"

#include <algorithm>
#include <cmath>

namespace noma {

double sample_gamma_power(int shape, double mean_power, RngStream& rng) {
  const double scale = mean_power / shape;
  double acc = 0.0;
  for (int i = 0; i < shape; ++i) acc += rng.next_exp();
  return acc * scale;
}

ChannelDraw draw_with_prs(const SystemParams& p, RngStream& rng) {
  // Draw order is fixed (K source->relay gains, then U1, then U2) so a
  // stream replays identically for given params.
  double best = 0.0;
  for (int k = 0; k < p.K; ++k)
    best = std::max(best, sample_gamma_power(p.m_sr, p.lambda_hat_sr(), rng));
  ChannelDraw d;
  d.g_sr = best;
  d.g_r1 = sample_gamma_power(p.m_r1, p.lambda_hat_r1(), rng);
  d.g_r2 = sample_gamma_power(p.m_r2, p.lambda_hat_r2(), rng);
  return d;
}

double gamma_power_cdf(int m, double mean_power, double x) {
  if (x <= 0.0) return 0.0;
  const double t = x * m / mean_power;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < m; ++k) {
    term *= t / k;
    sum += term;
  }
  return 1.0 - std::exp(-t) * sum;
}

double prs_max_cdf(const SystemParams& p, double x) {
  return std::pow(gamma_power_cdf(p.m_sr, p.lambda_hat_sr(), x), p.K);
}

}  // namespace noma
