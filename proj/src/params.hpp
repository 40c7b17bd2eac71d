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
#include <string>
#include <vector>

namespace noma {

/// Every physical and numerical constant of the downlink two-hop NOMA system
/// with K energy-harvesting decode-and-forward relays. Powers are normalised
/// by the receiver noise variance, so only the transmit SNR `rho` appears.
struct SystemParams {
  int K = 2;            // number of relays
  int m_sr = 2;         // Nakagami shape, source -> relay links
  int m_r1 = 2;         // Nakagami shape, relay -> U1
  int m_r2 = 2;         // Nakagami shape, relay -> U2
  double lambda_sr = 1.0;  // mean channel power gains E|h|^2
  double lambda_r1 = 1.0;
  double lambda_r2 = 0.5;
  double a1 = 0.3;      // power allocation, strong user U1
  double a2 = 0.7;      // power allocation, weak user U2
  double alpha = 0.35;  // energy-harvesting time fraction, (0,1)
  double mu = 0.9;      // energy conversion efficiency, (0,1]
  double rho = 100.0;   // transmit SNR P_s / sigma0^2, linear
  double sigma_e2 = 0.01;  // channel-estimation error variance
  double beta = 0.15;      // residual interference fraction after SIC
  double r1 = 0.5;      // target rate U1, bits per channel use
  double r2 = 0.5;      // target rate U2
  int n_taylor = 25;    // truncation order of the exp(-c/x) series

  double lambda_hat_sr() const { return lambda_sr - sigma_e2; }
  double lambda_hat_r1() const { return lambda_r1 - sigma_e2; }
  double lambda_hat_r2() const { return lambda_r2 - sigma_e2; }

  /// Copy with perfect channel knowledge and perfect SIC.
  SystemParams perfect() const {
    SystemParams p = *this;
    p.sigma_e2 = 0.0;
    p.beta = 0.0;
    return p;
  }
};

/// Checks every invariant; returns one message per violation (empty = valid).
std::vector<std::string> validate(const SystemParams& p);

/// Joins validate() output; throws std::invalid_argument when invalid.
void validate_or_throw(const SystemParams& p);

/// SINR thresholds and the auxiliary constants of the U1/U2 outage events.
/// When a feasibility flag is false the dependent constants are NaN and the
/// corresponding outage probability is pinned to 1 downstream.
struct DerivedThresholds {
  double gamma_th1 = 0.0;
  double gamma_th2 = 0.0;
  double lambda1 = 0.0;  // U1/U2 common: x2-decoding EH-scaled offset
  double lambda2 = 0.0;  // U1 only: x1-decoding EH-scaled offset
  double Omega1 = 0.0;   // CEE-driven floor constant, x2 decoding
  double Omega2 = 0.0;   // CEE-driven floor constant, x1 decoding
  double Delta1 = 0.0;   // selected-link threshold for the U2 event
  double psi = 0.0;      // selected-link threshold for the U1 event
  double gamma_lower = 0.0;  // lower integration limit of the U1 main branch
  bool feasible_u1 = false;
  bool feasible_u2 = false;
};

DerivedThresholds derive_thresholds(const SystemParams& p);

/// Config file contents: the system parameters plus the run controls that
/// accompany them in `key = value` files.
struct RunConfig {
  SystemParams params;
  std::uint64_t seed = 1;
  std::uint64_t n_trials = 1000000;
};

/// Assigns one `key = value` pair; key set is exactly the SystemParams field
/// names plus `seed` and `n_trials`. Returns an error message or empty.
std::string set_config_value(RunConfig& cfg, const std::string& key,
                             const std::string& value);

/// Parses a flat key = value file with '#' comments. Unknown keys, malformed
/// lines and unparsable values are collected into `errors`.
bool load_config_file(const std::string& path, RunConfig& cfg,
                      std::vector<std::string>& errors);

/// Reads a field by its config name (NaN for unknown keys).
double get_config_value(const RunConfig& cfg, const std::string& key);

}  // namespace noma
