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

#include "outage.hpp"
#include "params.hpp"
#include "specfun.hpp"

namespace noma {

/// Composite constants of the ergodic-rate CDFs.
struct RateCdfParams {
  int tau1;          // leading Bessel order (j = 0 term); per-term order is tau1 - j
  double xi1;        // b_r1 b_sr / zeta
  double xi2;        // b_r1 b_sr / zeta_bar
  double xi3;        // sigma_e2 (a1 + beta a2) / (beta a2)
  double zeta;       // EH-scaled gain of the U1 signal+interference variable
  double zeta_bar;   // EH-scaled gain of the U1 residual-interference variable
  double nu;         // U2 analogue of zeta
  double nu_bar;     // U2 analogue of zeta_bar (and perfect-U1 scale)
};

RateCdfParams derive_rate_constants(const SystemParams& p);

/// CDF of V = scale * X * (Y + shift), with X the best of K selected gains
/// and Y a destination-link gamma gain. Evaluated through the closed
/// Bessel-K form; terms are combined in log space so extreme parameter
/// corners cannot overflow.
class MixedCdf {
 public:
  MixedCdf(const PrsLink& sr, const DestLink& d, double scale, double shift);

  double operator()(double z) const;

  bool had_defect() const { return defect_; }

 private:
  struct Term {
    double ln_coef;  // log magnitude of the z-independent factor
    double sign;
    int j;           // power of (b_sr z / scale)
    int nu;          // signed Bessel order
    double mult;     // k + 1 scaling of the argument
  };
  std::vector<Term> terms_;
  double bsr_, bd_, scale_;
  double arg_scale_;       // 4 b_d b_sr / scale (w^2 = arg_scale * mult * z)
  bool degenerate_shift_;  // shift dominates Y; collapse to the scaled-X CDF
  PrsLink sr_;
  DestLink d_;
  double shift_;
  mutable bool defect_ = false;
};

/// The two U1 rate CDFs (signal+interference and residual-interference
/// variables). cdf_q requires beta > 0.
double cdf_p(const SystemParams& p, double z);
double cdf_q(const SystemParams& p, double z);

double ergodic_rate_u1_icsi(const SystemParams& p,
                            const specfun::QuadratureSpec& spec = {});
double ergodic_rate_u2_icsi(const SystemParams& p,
                            const specfun::QuadratureSpec& spec = {});

enum class User { u1 = 1, u2 = 2 };
double ergodic_rate_perfect(const SystemParams& p, User user,
                            const specfun::QuadratureSpec& spec = {});

}  // namespace noma
