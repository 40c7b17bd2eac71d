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

#include "sinr.hpp"

#include <algorithm>
#include <cmath>

namespace noma {

double relay_power(const SystemParams& p, double g_sr) {
  return 2.0 * p.rho * p.mu * g_sr * p.alpha / (1.0 - p.alpha);
}

SinrSet compute_sinrs(const SystemParams& p, const ChannelDraw& d) {
  const double se2 = p.sigma_e2;
  const double cee1 = p.a1 + p.beta * p.a2;  // x1-decoding CEE coefficient
  const double pr = relay_power(p, d.g_sr);

  SinrSet s;
  s.g_r2_at_relay = d.g_sr * p.rho * p.a2 /
                    (d.g_sr * p.rho * p.a1 + p.rho * se2 + 1.0);
  s.g_r1_at_relay = d.g_sr * p.rho * p.a1 /
                    (d.g_sr * p.rho * p.beta * p.a2 + p.rho * se2 * cee1 + 1.0);
  s.g_12_at_u1 = d.g_r1 * pr * p.a2 / (d.g_r1 * pr * p.a1 + pr * se2 + 1.0);
  s.g_11_at_u1 = d.g_r1 * pr * p.a1 /
                 (d.g_r1 * pr * p.beta * p.a2 + pr * se2 * cee1 + 1.0);
  s.g_22_at_u2 = d.g_r2 * pr * p.a2 / (d.g_r2 * pr * p.a1 + pr * se2 + 1.0);
  return s;
}

std::pair<bool, bool> outage_events(const DerivedThresholds& t, const SinrSet& s) {
  const bool u1_ok = s.g_r2_at_relay >= t.gamma_th2 &&
                     s.g_r1_at_relay >= t.gamma_th1 &&
                     s.g_12_at_u1 >= t.gamma_th2 && s.g_11_at_u1 >= t.gamma_th1;
  const bool u2_ok = s.g_r2_at_relay >= t.gamma_th2 && s.g_22_at_u2 >= t.gamma_th2;
  return {!u1_ok, !u2_ok};
}

std::pair<double, double> instantaneous_rates(const SystemParams& p, const SinrSet& s) {
  const double half_time = 0.5 * (1.0 - p.alpha);
  const double r1 = half_time * std::log2(1.0 + std::min(s.g_r1_at_relay, s.g_11_at_u1));
  const double r2 = half_time * std::log2(1.0 + std::min(s.g_r2_at_relay, s.g_22_at_u2));
  return {r1, r2};
}

}  // namespace noma
