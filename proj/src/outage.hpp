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

#include <vector>

#include "params.hpp"

namespace noma {

/// Expansion of (sum_{n<m} (b x)^n / n!)^k into sum_c weight * (b x)^{ibar}.
/// Weights carry the multinomial coefficient and the 1/n! powers; the caller
/// supplies b^{ibar}. Tables are built once per (m, k) and cached.
struct PowerSumExpansion {
  struct Term {
    double weight;
    int ibar;
  };
  std::vector<Term> terms;
};

const PowerSumExpansion& power_sum_expansion(int m, int k);

struct DestLink {
  int m;     // Nakagami shape of the relay->user link
  double b;  // rate parameter m / mean
};

struct PrsLink {
  int K;
  int m;     // Nakagami shape of the source->relay links
  double b;  // rate parameter m / mean
};

/// Numerical health of one closed-form evaluation.
struct OutageDiag {
  double raw = 0.0;              // value before clamping to [0, 1]
  bool clamped = false;
  double taylor_tail_rel = 0.0;  // worst |last series term| / |partial sum|
  bool taylor_warning = false;   // tail estimate above 1e-4
  bool single_branch = false;    // U1 event geometry collapsed to one branch
  // The truncated exp(-c/x) series is alternating; once its argument
  // outgrows what the configured order (and double precision) can sum, the
  // same integral is taken by adaptive quadrature instead.
  bool quadrature_fallback = false;
};

struct OutageOptions {
  int n_taylor = 0;           // 0: use params.n_taylor
  double omega2_scale = 1.0;  // validation hook; perturbs only the analytic x1 constant
};

/// Closed form of  int_lo^hi S_d(lam/x + om) f_sel(x) dx  where S_d is the
/// destination-link gamma survival and f_sel the density of the best of K
/// source->relay gains. `hi` may be +infinity. Uses the truncated exp(-c/x)
/// series and upper incomplete gamma terms.
double core_integral(const DestLink& d, const PrsLink& sr, double lam,
                     double om, double lo, double hi, int n_taylor,
                     OutageDiag* diag = nullptr);

double outage_u1_icsi(const SystemParams& p, const DerivedThresholds& t,
                      const OutageOptions& opts = {}, OutageDiag* diag = nullptr);
double outage_u2_icsi(const SystemParams& p, const DerivedThresholds& t,
                      const OutageOptions& opts = {}, OutageDiag* diag = nullptr);
double outage_u1_perfect(const SystemParams& p, const OutageOptions& opts = {},
                         OutageDiag* diag = nullptr);
double outage_u2_perfect(const SystemParams& p, const OutageOptions& opts = {},
                         OutageDiag* diag = nullptr);

enum class AsyKind { u1_icsi, u2_icsi, u1_perfect, u2_perfect };

/// High-SNR approximations: the imperfect-CSI/SIC expressions are
/// SNR-independent floors, the perfect ones decay polynomially.
double outage_asymptotic(const SystemParams& p, AsyKind kind);

enum class CsiMode { imperfect, perfect };

/// Delay-limited throughput from the analytic outage pair.
double throughput_analytic(const SystemParams& p, CsiMode csi,
                           const OutageOptions& opts = {});

/// Throughput from externally supplied outage probabilities.
double throughput_from_outage(const SystemParams& p, double pout1, double pout2);

}  // namespace noma
