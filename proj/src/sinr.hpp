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

#include <utility>

#include "channel.hpp"
#include "params.hpp"

namespace noma {

/// The five link SINRs of one realisation. The relay must decode both
/// symbols; U1 decodes x2 then (after SIC) x1; U2 decodes x2 only.
struct SinrSet {
  double g_r2_at_relay;  // x2 at the relay
  double g_r1_at_relay;  // x1 at the relay, residual-SIC limited
  double g_12_at_u1;     // x2 at U1
  double g_11_at_u1;     // x1 at U1
  double g_22_at_u2;     // x2 at U2
};

/// Harvested relay transmit power normalised by the noise variance.
double relay_power(const SystemParams& p, double g_sr);

SinrSet compute_sinrs(const SystemParams& p, const ChannelDraw& d);

/// (u1_in_outage, u2_in_outage) for one realisation.
std::pair<bool, bool> outage_events(const DerivedThresholds& t, const SinrSet& s);

/// Instantaneous achievable rates (decode-and-forward bottleneck), bpcu.
std::pair<double, double> instantaneous_rates(const SystemParams& p, const SinrSet& s);

}  // namespace noma
