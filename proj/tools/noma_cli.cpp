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

// Command-line front end; talks to the library exclusively through the
// public C interface.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nomarelay/nomarelay.h"

namespace {

struct ParamsDeleter {
  void operator()(noma_params* p) const { noma_params_free(p); }
};
using ParamsPtr = std::unique_ptr<noma_params, ParamsDeleter>;

int report(int rc) {
  if (rc != NOMA_OK) std::fprintf(stderr, "error: %s\n", noma_last_error());
  return rc;
}

bool parse_grid(const std::string& s, std::vector<double>& out,
                std::string& err) {
  out.clear();
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    err = "grid must be start:stop:step";
    return false;
  }
  char* end = nullptr;
  const double start = std::strtod(s.substr(0, c1).c_str(), &end);
  const double stop = std::strtod(s.substr(c1 + 1, c2 - c1 - 1).c_str(), &end);
  const double step = std::strtod(s.substr(c2 + 1).c_str(), &end);
  if (!(step > 0.0) || stop < start) {
    err = "grid requires stop >= start and step > 0";
    return false;
  }
  const long long n = std::llround((stop - start) / step);
  for (long long i = 0; i <= n; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v <= stop + 1e-9 * step) out.push_back(v);
  }
  return !out.empty();
}

ParamsPtr load_params(const std::string& config_path,
                      const std::vector<std::string>& sets, int& rc) {
  ParamsPtr p;
  if (!config_path.empty()) {
    p.reset(noma_params_load(config_path.c_str()));
    if (!p) {
      std::fprintf(stderr, "error: %s\n", noma_last_error());
      rc = NOMA_ERR_CONFIG;
      return p;
    }
  } else {
    p.reset(noma_params_create());
  }
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      rc = NOMA_ERR_CONFIG;
      p.reset();
      return p;
    }
    if (noma_params_set(p.get(), kv.substr(0, eq).c_str(),
                        kv.substr(eq + 1).c_str()) != NOMA_OK) {
      std::fprintf(stderr, "error: %s\n", noma_last_error());
      rc = NOMA_ERR_CONFIG;
      p.reset();
      return p;
    }
  }
  rc = NOMA_OK;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nomarelay: outage/rate/throughput analysis of an "
               "energy-harvesting cooperative NOMA relay system"};
  app.require_subcommand(1);

  std::string config_path, out_path, grid_str;
  std::vector<std::string> sets;
  std::string csi = "imperfect";
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  bool have_seed = false, have_trials = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value config file");
    cmd->add_option("--out", out_path, "output CSV path")->required();
    cmd->add_option("--set", sets, "override one key (key=value, repeatable)");
    cmd->add_option("--csi", csi, "imperfect | perfect");
    cmd->add_option("--seed", seed, "random seed")->each([&](const std::string&) {
      have_seed = true;
    });
    cmd->add_option("--trials", trials, "Monte-Carlo trials")
        ->each([&](const std::string&) { have_trials = true; });
  };

  // sweep
  auto* sweep = app.add_subcommand("sweep", "evaluate quantities over a grid");
  std::string var = "rho_db";
  std::string quantities = "outage_u1,outage_u2";
  std::string mode = "analytic";
  add_common(sweep);
  sweep->add_option("--var", var, "rho_db | alpha | sigma_e2 | K | a1 | beta");
  sweep->add_option("--grid", grid_str, "start:stop:step")->required();
  sweep->add_option("--quantities", quantities, "comma list");
  sweep->add_option("--mode", mode, "analytic | montecarlo | both");

  // validate
  auto* val = app.add_subcommand("validate",
                                 "check analytic quantities against Monte-Carlo");
  double omega2_scale = 1.0;
  std::string val_grid = "0:40:5";
  add_common(val);
  val->add_option("--grid", val_grid, "rho_db grid start:stop:step");
  val->add_option("--debug-omega2-scale", omega2_scale,
                  "perturb the analytic U1 constants (negative control)")
      ->group("");  // hidden

  // optimize
  auto* opt = app.add_subcommand("optimize",
                                 "search the throughput-optimal harvesting fraction");
  std::string backend = "analytic";
  std::uint64_t pso_seed = 1;
  add_common(opt);
  opt->add_option("--backend", backend, "analytic | montecarlo");
  opt->add_option("--pso-seed", pso_seed, "particle-swarm seed");

  CLI11_PARSE(app, argc, argv);

  int rc = NOMA_OK;
  ParamsPtr params = load_params(config_path, sets, rc);
  if (!params) return rc ? rc : NOMA_ERR_CONFIG;
  if (have_seed)
    noma_params_set(params.get(), "seed", std::to_string(seed).c_str());
  if (have_trials)
    noma_params_set(params.get(), "n_trials", std::to_string(trials).c_str());

  const noma_csi csi_mode =
      (csi == "perfect") ? NOMA_CSI_PERFECT : NOMA_CSI_IMPERFECT;
  if (csi != "perfect" && csi != "imperfect") {
    std::fprintf(stderr, "error: --csi must be imperfect or perfect\n");
    return NOMA_ERR_CONFIG;
  }

  if (sweep->parsed()) {
    std::vector<double> grid;
    std::string err;
    if (!parse_grid(grid_str, grid, err)) {
      std::fprintf(stderr, "error: %s\n", err.c_str());
      return NOMA_ERR_CONFIG;
    }
    noma_sweep_spec spec{};
    spec.variable = var.c_str();
    spec.grid = grid.data();
    spec.grid_len = grid.size();
    spec.quantities = quantities.c_str();
    spec.mode = mode.c_str();
    spec.csi = csi.c_str();
    const int code = report(noma_run_sweep(params.get(), &spec, out_path.c_str()));
    if (code == NOMA_OK)
      std::printf("sweep: %zu rows -> %s\n", grid.size(), out_path.c_str());
    return code;
  }

  if (val->parsed()) {
    std::vector<double> grid;
    std::string err;
    if (!parse_grid(val_grid, grid, err)) {
      std::fprintf(stderr, "error: %s\n", err.c_str());
      return NOMA_ERR_CONFIG;
    }
    const int code =
        report(noma_run_validate(params.get(), csi_mode, grid.data(),
                                 grid.size(), omega2_scale, out_path.c_str()));
    if (code == NOMA_OK) {
      const char* warn = noma_last_error();
      if (warn && warn[0]) std::fprintf(stderr, "%s\n", warn);
      std::printf("validate: all comparisons passed -> %s\n", out_path.c_str());
    }
    return code;
  }

  // optimize
  noma_pso_summary summary{};
  const noma_backend bk = (backend == "montecarlo") ? NOMA_BACKEND_MONTECARLO
                                                    : NOMA_BACKEND_ANALYTIC;
  if (backend != "montecarlo" && backend != "analytic") {
    std::fprintf(stderr, "error: --backend must be analytic or montecarlo\n");
    return NOMA_ERR_CONFIG;
  }
  const int code = report(noma_run_optimize(params.get(), bk, csi_mode,
                                            pso_seed, out_path.c_str(), &summary));
  if (code == NOMA_OK)
    std::printf("best_alpha=%.17g best_objective=%.17g\n", summary.best_alpha,
                summary.best_objective);
  return code;
}
