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

#include "rate.hpp"

#include <algorithm>
#include <cmath>

#include "channel.hpp"

namespace noma {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// ln[(w/2)^nu K_|nu|(w)] with a signed order; the small-argument branch uses
// the leading K behaviour so tiny w never overflows intermediate values.
double ln_bessel_pair(int nu, double w) {
  using specfun::bessel_k_scaled;
  using specfun::ln_gamma;
  const int a = std::abs(nu);
  const double lw = std::log(0.5 * w);
  if (w < 1e-6 && a >= 1) {
    // K_a(w) ~ Gamma(a)/2 (2/w)^a
    return (nu - a) * lw + ln_gamma(a) - std::log(2.0);
  }
  return nu * lw + std::log(bessel_k_scaled(a, w)) - w;
}

DestLink r1_link(const SystemParams& p) {
  return {p.m_r1, p.m_r1 / p.lambda_hat_r1()};
}
DestLink r2_link(const SystemParams& p) {
  return {p.m_r2, p.m_r2 / p.lambda_hat_r2()};
}
PrsLink sr_link(const SystemParams& p) {
  return {p.K, p.m_sr, p.m_sr / p.lambda_hat_sr()};
}

double rate_prefactor(const SystemParams& p) {
  return (1.0 - p.alpha) / (2.0 * kLn2);
}

double log_integral(const std::function<double(double)>& one_minus_cdf,
                    const specfun::QuadratureSpec& spec) {
  return specfun::integrate_semi_infinite(
      [&](double z) { return one_minus_cdf(z) / (1.0 + z); }, spec);
}

}  // namespace

RateCdfParams derive_rate_constants(const SystemParams& p) {
  RateCdfParams c;
  const double eh = 2.0 * p.rho * p.mu * p.alpha / (1.0 - p.alpha);
  const double br1 = p.m_r1 / p.lambda_hat_r1();
  const double bsr = p.m_sr / p.lambda_hat_sr();
  c.tau1 = p.m_sr;
  c.zeta = eh * (p.a1 + p.beta * p.a2);
  c.zeta_bar = eh * p.beta * p.a2;
  c.nu = eh;
  c.nu_bar = eh * p.a1;
  c.xi1 = br1 * bsr / c.zeta;
  c.xi2 = (c.zeta_bar > 0.0) ? br1 * bsr / c.zeta_bar : 0.0;
  c.xi3 = (p.beta > 0.0) ? p.sigma_e2 * (p.a1 + p.beta * p.a2) / (p.beta * p.a2)
                         : 0.0;
  return c;
}

MixedCdf::MixedCdf(const PrsLink& sr, const DestLink& d, double scale,
                   double shift)
    : bsr_(sr.b), bd_(d.b), scale_(scale),
      arg_scale_(4.0 * d.b * sr.b / scale),
      degenerate_shift_(d.b * shift > 300.0),
      sr_(sr), d_(d), shift_(shift) {
  if (degenerate_shift_) {
    defect_ = true;
    return;
  }
  const double ln_front =
      std::log(2.0 * sr.K / factorial(sr.m - 1)) + d.b * shift;
  for (int n = 0; n < d.m; ++n) {
    const int jlo = (shift == 0.0) ? n : 0;
    for (int j = jlo; j <= n; ++j) {
      const double base_sign = ((n - j) % 2) ? -1.0 : 1.0;
      const double ln_base =
          ln_front + n * std::log(d.b) - std::log(factorial(n)) +
          std::log(binom(n, j)) +
          (n - j) * ((shift > 0.0) ? std::log(shift) : 0.0);
      // The selected-link density prefactor b_sr^{m+ibar} cancels against
      // the Bessel pair's (b_sr mult)^{-nu} down to b_sr^j mult^{-nu}; the
      // b_sr^j part rides with (z/scale)^j at evaluation time.
      terms_.push_back({ln_base, base_sign, j, sr.m - j, 1.0});
      for (int k = 1; k < sr.K; ++k) {
        const double ksign = (k % 2) ? -1.0 : 1.0;
        const double lnck = std::log(binom(sr.K - 1, k));
        const auto& exp_k = power_sum_expansion(sr.m, k);
        for (const auto& t : exp_k.terms) {
          const int nu = sr.m - j + t.ibar;
          terms_.push_back({ln_base + lnck + std::log(t.weight) -
                                nu * std::log(k + 1.0),
                            base_sign * ksign, j, nu, k + 1.0});
        }
      }
    }
  }
}

double MixedCdf::operator()(double z) const {
  if (z <= 0.0) return 0.0;
  if (degenerate_shift_) {
    // Shift dwarfs the destination gain: V ~ scale * shift * X.
    const double x = z / (scale_ * shift_);
    double u = 1.0;
    double t = bsr_ * x;
    double term = 1.0;
    for (int k = 1; k < sr_.m; ++k) {
      term *= t / k;
      u += term;
    }
    return std::pow(1.0 - std::exp(-t) * u, sr_.K);
  }
  const double lnzc = std::log(bsr_ * z / scale_);
  double surv = 0.0;
  for (const auto& t : terms_) {
    const double w = std::sqrt(arg_scale_ * t.mult * z);
    const double ln_mag = t.ln_coef + t.j * lnzc + ln_bessel_pair(t.nu, w);
    surv += t.sign * std::exp(ln_mag);
  }
  const double raw = 1.0 - surv;
  if (raw < -1e-9 || raw > 1.0 + 1e-9) defect_ = true;
  return std::min(1.0, std::max(0.0, raw));
}

double cdf_p(const SystemParams& p, double z) {
  const RateCdfParams c = derive_rate_constants(p);
  MixedCdf f(sr_link(p), r1_link(p), c.zeta, p.sigma_e2);
  return f(z);
}

double cdf_q(const SystemParams& p, double z) {
  if (p.beta <= 0.0)
    throw std::domain_error("cdf_q: degenerate for beta = 0 (no residual-interference variable)");
  const RateCdfParams c = derive_rate_constants(p);
  MixedCdf f(sr_link(p), r1_link(p), c.zeta_bar, c.xi3);
  return f(z);
}

double ergodic_rate_u1_icsi(const SystemParams& p,
                            const specfun::QuadratureSpec& spec) {
  const RateCdfParams c = derive_rate_constants(p);
  const MixedCdf fp(sr_link(p), r1_link(p), c.zeta, p.sigma_e2);
  const double ip = log_integral([&](double z) { return 1.0 - fp(z); }, spec);
  double iq = 0.0;
  if (p.beta > 0.0) {
    const MixedCdf fq(sr_link(p), r1_link(p), c.zeta_bar, c.xi3);
    iq = log_integral([&](double z) { return 1.0 - fq(z); }, spec);
  } else if (p.sigma_e2 > 0.0) {
    // Perfect SIC with CEE: the subtracted variable collapses to a scaled
    // selected gain.
    const double s = c.nu_bar * p.sigma_e2;
    iq = log_integral([&](double z) { return 1.0 - prs_max_cdf(p, z / s); }, spec);
  }
  return std::max(0.0, rate_prefactor(p) * (ip - iq));
}

double ergodic_rate_u2_icsi(const SystemParams& p,
                            const specfun::QuadratureSpec& spec) {
  const RateCdfParams c = derive_rate_constants(p);
  const MixedCdf fp(sr_link(p), r2_link(p), c.nu, p.sigma_e2);
  const MixedCdf fq(sr_link(p), r2_link(p), c.nu_bar, p.sigma_e2 / p.a1);
  const double ip = log_integral([&](double z) { return 1.0 - fp(z); }, spec);
  const double iq = log_integral([&](double z) { return 1.0 - fq(z); }, spec);
  return std::max(0.0, rate_prefactor(p) * (ip - iq));
}

double ergodic_rate_perfect(const SystemParams& p, User user,
                            const specfun::QuadratureSpec& spec) {
  const SystemParams q = p.perfect();
  const RateCdfParams c = derive_rate_constants(q);
  if (user == User::u1) {
    const MixedCdf f(sr_link(q), r1_link(q), c.nu_bar, 0.0);
    const double i = log_integral([&](double z) { return 1.0 - f(z); }, spec);
    return std::max(0.0, rate_prefactor(q) * i);
  }
  const MixedCdf fp(sr_link(q), r2_link(q), c.nu, 0.0);
  const MixedCdf fq(sr_link(q), r2_link(q), c.nu_bar, 0.0);
  const double ip = log_integral([&](double z) { return 1.0 - fp(z); }, spec);
  const double iq = log_integral([&](double z) { return 1.0 - fq(z); }, spec);
  return std::max(0.0, rate_prefactor(q) * (ip - iq));
}

}  // namespace noma
