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

#include <string>
#include <vector>

#include "outage.hpp"
#include "params.hpp"
#include "pso.hpp"

namespace noma {

// Shared status values; the CLI maps them one-to-one onto exit codes.
enum Status : int {
  kOk = 0,
  kConfigError = 2,
  kNumericError = 3,
  kIoError = 4,
};

enum class SweepVar { rho_db, alpha, sigma_e2, K, a1, beta };
enum class RunMode { analytic, montecarlo, both };
enum class Quantity {
  outage_u1,
  outage_u2,
  outage_u1_asy,
  outage_u2_asy,
  rate_u1,
  rate_u2,
  sum_rate,
  throughput,
};

struct SweepSpec {
  SweepVar var = SweepVar::rho_db;
  std::vector<double> grid;
  std::vector<Quantity> quantities;
  RunMode mode = RunMode::analytic;
  CsiMode csi = CsiMode::imperfect;
};

bool parse_sweep_var(const std::string& s, SweepVar& out);
bool parse_run_mode(const std::string& s, RunMode& out);
bool parse_csi(const std::string& s, CsiMode& out);
bool parse_quantities(const std::string& csv, std::vector<Quantity>& out,
                      std::string& err);

/// Substitutes one grid value into a fresh parameter copy.
/// Sweeping a1 keeps the power split valid by setting a2 = 1 - a1.
bool apply_sweep_value(SystemParams& p, SweepVar var, double value,
                       std::string& err);

/// Writes one CSV row per grid point with `<quantity>_<mode>` columns
/// (modes: `analytic`, `mc`, plus `<quantity>_mc_ci` companions).
int run_sweep(const RunConfig& cfg, const SweepSpec& spec,
              const std::string& out_path, std::string& err);

/// Compares every analytic quantity against Monte-Carlo on a transmit-SNR
/// grid at the module tolerances; writes a pass/fail CSV table.
/// omega2_scale != 1 perturbs the analytic U1 constants (negative control).
int run_validate(const RunConfig& cfg, CsiMode csi,
                 const std::vector<double>& rho_db_grid, double omega2_scale,
                 const std::string& out_path, std::string& err);

/// Optimises the harvesting fraction and writes the per-iteration trace.
int run_optimize(const RunConfig& cfg, ObjectiveBackend backend, CsiMode csi,
                 const PsoConfig& pso, const std::string& out_path,
                 std::string& err, PsoResult* result = nullptr);

}  // namespace noma
