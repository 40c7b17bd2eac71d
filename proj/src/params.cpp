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

#include "params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace noma {

namespace {
const double kNan = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& v, double& out) {
  char* end = nullptr;
  out = std::strtod(v.c_str(), &end);
  return end && *end == '\0' && !v.empty() && std::isfinite(out);
}

bool parse_int(const std::string& v, int& out) {
  double d;
  if (!parse_double(v, d)) return false;
  if (d != std::floor(d) || std::fabs(d) > 1e9) return false;
  out = static_cast<int>(d);
  return true;
}

bool parse_u64(const std::string& v, std::uint64_t& out) {
  char* end = nullptr;
  unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (!end || *end != '\0' || v.empty() || v[0] == '-') return false;
  out = static_cast<std::uint64_t>(x);
  return true;
}
}  // namespace

std::vector<std::string> validate(const SystemParams& p) {
  std::vector<std::string> errs;
  auto bad = [&errs](const std::string& m) { errs.push_back(m); };

  if (p.K < 1) bad("K: must be >= 1");
  if (p.m_sr < 1) bad("m_sr: must be a positive integer");
  if (p.m_r1 < 1) bad("m_r1: must be a positive integer");
  if (p.m_r2 < 1) bad("m_r2: must be a positive integer");
  if (!(p.lambda_sr > 0.0)) bad("lambda_sr: must be > 0");
  if (!(p.lambda_r1 > 0.0)) bad("lambda_r1: must be > 0");
  if (!(p.lambda_r2 > 0.0)) bad("lambda_r2: must be > 0");
  if (!(p.a1 > 0.0)) bad("a1: must be > 0");
  if (!(p.a2 > 0.0)) bad("a2: must be > 0");
  if (std::fabs(p.a1 + p.a2 - 1.0) > 1e-12) bad("a1, a2: must satisfy a1 + a2 = 1");
  if (!(p.a2 > p.a1)) bad("a1, a2: weak-user ordering requires a2 > a1");
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) bad("alpha: must lie in (0, 1)");
  if (!(p.mu > 0.0 && p.mu <= 1.0)) bad("mu: must lie in (0, 1]");
  if (!(p.rho > 0.0)) bad("rho: must be > 0");
  if (!(p.sigma_e2 >= 0.0)) bad("sigma_e2: must be >= 0");
  const double lmin = std::min({p.lambda_sr, p.lambda_r1, p.lambda_r2});
  if (p.sigma_e2 >= lmin)
    bad("sigma_e2: must be < min(lambda_sr, lambda_r1, lambda_r2) so estimated variances stay positive");
  if (!(p.beta >= 0.0 && p.beta <= 1.0)) bad("beta: must lie in [0, 1]");
  if (!(p.r1 > 0.0)) bad("r1: must be > 0");
  if (!(p.r2 > 0.0)) bad("r2: must be > 0");
  if (p.n_taylor < 2) bad("n_taylor: must be >= 2");
  return errs;
}

void validate_or_throw(const SystemParams& p) {
  const auto errs = validate(p);
  if (errs.empty()) return;
  std::string joined;
  for (const auto& e : errs) {
    if (!joined.empty()) joined += "; ";
    joined += e;
  }
  throw std::invalid_argument("invalid SystemParams: " + joined);
}

DerivedThresholds derive_thresholds(const SystemParams& p) {
  DerivedThresholds t;
  const double inf_time = 1.0 - p.alpha;
  t.gamma_th1 = std::exp2(2.0 * p.r1 / inf_time) - 1.0;
  t.gamma_th2 = std::exp2(2.0 * p.r2 / inf_time) - 1.0;

  const double den2 = p.a2 - p.a1 * t.gamma_th2;          // x2 decoding margin
  const double den1 = p.a1 - p.a2 * p.beta * t.gamma_th1; // x1 decoding margin
  t.feasible_u2 = den2 > 0.0;
  t.feasible_u1 = t.feasible_u2 && den1 > 0.0;

  t.lambda1 = t.Omega1 = t.Delta1 = kNan;
  t.lambda2 = t.Omega2 = t.psi = t.gamma_lower = kNan;
  if (!t.feasible_u2) return t;

  const double eh_gain = 2.0 * p.alpha * p.mu * p.rho;  // harvested-power scale
  t.lambda1 = t.gamma_th2 * inf_time / (den2 * eh_gain);
  t.Omega1 = t.gamma_th2 * p.sigma_e2 / den2;
  t.Delta1 = t.gamma_th2 * (p.sigma_e2 + 1.0 / p.rho) / den2;
  if (!t.feasible_u1) return t;

  t.lambda2 = t.gamma_th1 * inf_time / (den1 * eh_gain);
  t.Omega2 = t.gamma_th1 * (p.a1 + p.a2 * p.beta) * p.sigma_e2 / den1;
  const double psi_u1 =
      t.gamma_th1 * (p.sigma_e2 * (p.a1 + p.a2 * p.beta) + 1.0 / p.rho) / den1;
  t.psi = std::max(t.Delta1, psi_u1);
  if (t.Omega1 > t.Omega2 && t.lambda2 > t.lambda1) {
    t.gamma_lower = std::max(t.psi, (t.lambda2 - t.lambda1) / (t.Omega1 - t.Omega2));
  } else {
    t.gamma_lower = t.psi;
  }
  return t;
}

std::string set_config_value(RunConfig& cfg, const std::string& key,
                             const std::string& value) {
  SystemParams& p = cfg.params;
  auto want_int = [&](int& dst) -> std::string {
    int v;
    if (!parse_int(value, v)) return key + ": expected an integer, got '" + value + "'";
    dst = v;
    return "";
  };
  auto want_dbl = [&](double& dst) -> std::string {
    double v;
    if (!parse_double(value, v)) return key + ": expected a number, got '" + value + "'";
    dst = v;
    return "";
  };
  auto want_u64 = [&](std::uint64_t& dst) -> std::string {
    std::uint64_t v;
    if (!parse_u64(value, v)) return key + ": expected an unsigned integer, got '" + value + "'";
    dst = v;
    return "";
  };

  if (key == "K") return want_int(p.K);
  if (key == "m_sr") return want_int(p.m_sr);
  if (key == "m_r1") return want_int(p.m_r1);
  if (key == "m_r2") return want_int(p.m_r2);
  if (key == "lambda_sr") return want_dbl(p.lambda_sr);
  if (key == "lambda_r1") return want_dbl(p.lambda_r1);
  if (key == "lambda_r2") return want_dbl(p.lambda_r2);
  if (key == "a1") return want_dbl(p.a1);
  if (key == "a2") return want_dbl(p.a2);
  if (key == "alpha") return want_dbl(p.alpha);
  if (key == "mu") return want_dbl(p.mu);
  if (key == "rho") return want_dbl(p.rho);
  if (key == "sigma_e2") return want_dbl(p.sigma_e2);
  if (key == "beta") return want_dbl(p.beta);
  if (key == "r1") return want_dbl(p.r1);
  if (key == "r2") return want_dbl(p.r2);
  if (key == "n_taylor") return want_int(p.n_taylor);
  if (key == "seed") return want_u64(cfg.seed);
  if (key == "n_trials") return want_u64(cfg.n_trials);
  return key + ": unknown key";
}

bool load_config_file(const std::string& path, RunConfig& cfg,
                      std::vector<std::string>& errors) {
  std::ifstream in(path);
  if (!in) {
    errors.push_back("cannot open config file: " + path);
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string err = set_config_value(cfg, key, value);
    if (!err.empty())
      errors.push_back("line " + std::to_string(lineno) + ": " + err);
  }
  return errors.empty();
}

double get_config_value(const RunConfig& cfg, const std::string& key) {
  const SystemParams& p = cfg.params;
  if (key == "K") return p.K;
  if (key == "m_sr") return p.m_sr;
  if (key == "m_r1") return p.m_r1;
  if (key == "m_r2") return p.m_r2;
  if (key == "lambda_sr") return p.lambda_sr;
  if (key == "lambda_r1") return p.lambda_r1;
  if (key == "lambda_r2") return p.lambda_r2;
  if (key == "a1") return p.a1;
  if (key == "a2") return p.a2;
  if (key == "alpha") return p.alpha;
  if (key == "mu") return p.mu;
  if (key == "rho") return p.rho;
  if (key == "sigma_e2") return p.sigma_e2;
  if (key == "beta") return p.beta;
  if (key == "r1") return p.r1;
  if (key == "r2") return p.r2;
  if (key == "n_taylor") return p.n_taylor;
  if (key == "seed") return static_cast<double>(cfg.seed);
  if (key == "n_trials") return static_cast<double>(cfg.n_trials);
  return kNan;
}

}  // namespace noma
