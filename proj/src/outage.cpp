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

#include "outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "channel.hpp"
#include "specfun.hpp"

namespace noma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

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

void enumerate_compositions(int m, int k, int part, int left, double weight,
                            int ibar, PowerSumExpansion& out) {
  if (part == m - 1) {
    // last exponent takes the remaining count
    const double w = weight / std::pow(factorial(part), left) / factorial(left);
    out.terms.push_back({w, ibar + part * left});
    return;
  }
  for (int c = 0; c <= left; ++c) {
    const double w = weight / std::pow(factorial(part), c) / factorial(c);
    enumerate_compositions(m, k, part + 1, left - c, w, ibar + part * c, out);
  }
}

// Survival of a unit-rate gamma with integer shape at t: e^{-t} sum t^j/j!.
double gamma_survival_unit(int m, double t) {
  double term = 1.0, sum = 1.0;
  for (int j = 1; j < m; ++j) {
    term *= t / j;
    sum += term;
  }
  return std::exp(-t) * sum;
}

double gamma_diff(double kappa, double zlo, double zhi) {
  using specfun::upper_incomplete_gamma;
  double g = upper_incomplete_gamma(kappa, zlo);
  if (std::isfinite(zhi)) g -= upper_incomplete_gamma(kappa, zhi);
  return g;
}

double prs_density(const PrsLink& sr, double x) {
  const double t = sr.b * x;
  double pdf = std::pow(sr.b, sr.m) * std::pow(x, sr.m - 1) * std::exp(-t) /
               factorial(sr.m - 1);
  if (sr.K > 1) {
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < sr.m; ++j) {
      term *= t / j;
      sum += term;
    }
    const double cdf1 = 1.0 - std::exp(-t) * sum;
    pdf *= sr.K * std::pow(cdf1, sr.K - 1);
  }
  return pdf;
}

// Direct quadrature of the survival-against-density integral; used when the
// series argument b_d * lam / lo is too large for the truncated expansion.
double core_integral_quadrature(const DestLink& d, const PrsLink& sr,
                                double lam, double om, double lo, double hi) {
  auto f = [&](double x) {
    return gamma_survival_unit(d.m, d.b * (lam / x + om)) * prs_density(sr, x);
  };
  int budget = 400000;
  if (std::isfinite(hi))
    return specfun::integrate_adaptive(f, lo, hi, 1e-12, budget);
  double total = 0.0;
  double a = lo;
  double width = 1.0 / sr.b;
  int quiet = 0;
  for (int i = 0; i < 80; ++i) {
    const double seg = specfun::integrate_adaptive(f, a, a + width, 1e-13, budget);
    total += seg;
    quiet = (std::fabs(seg) < 1e-13 + 1e-12 * std::fabs(total)) ? quiet + 1 : 0;
    if (quiet >= 2) break;
    a += width;
    width *= 2.0;
  }
  return total;
}

// Relative tail left by truncating sum (-t)^l / l! at order n.
double series_tail_rel(double t, int n) {
  if (t <= 0.0) return 0.0;
  return std::exp((n + 1) * std::log(t) + t - specfun::ln_gamma(n + 2.0));
}

double clamp_probability(double raw, OutageDiag* diag) {
  if (diag) {
    diag->raw = raw;
    diag->clamped = raw < 0.0 || raw > 1.0;
  }
  return std::min(1.0, std::max(0.0, raw));
}

struct BindingPair {
  double lam;
  double om;
};

// Integrates the U1 survival-against-density product over [psi, inf) with
// the binding constraint max(lam_a/x + om_a, lam_b/x + om_b) resolved
// piecewise around its crossing point.
double u1_event_integral(const DestLink& d, const PrsLink& sr, BindingPair a,
                         BindingPair b, double psi, int n_taylor,
                         OutageDiag* diag) {
  const bool crossing = (a.lam > b.lam && a.om < b.om) ||
                        (a.lam < b.lam && a.om > b.om);
  if (!crossing) {
    // One pair dominates everywhere.
    const BindingPair& p =
        (a.lam >= b.lam && a.om >= b.om) ? a : b;
    if (diag) diag->single_branch = true;
    return core_integral(d, sr, p.lam, p.om, psi, kInf, n_taylor, diag);
  }
  const double xstar = (b.lam - a.lam) / (a.om - b.om);  // > 0 here
  const BindingPair& low = (a.lam > b.lam) ? a : b;   // binds for small x
  const BindingPair& high = (a.om > b.om) ? a : b;    // binds for large x
  if (xstar <= psi) {
    if (diag) diag->single_branch = true;
    return core_integral(d, sr, high.lam, high.om, psi, kInf, n_taylor, diag);
  }
  return core_integral(d, sr, low.lam, low.om, psi, xstar, n_taylor, diag) +
         core_integral(d, sr, high.lam, high.om, xstar, kInf, n_taylor, diag);
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

int taylor_order(const SystemParams& p, const OutageOptions& o) {
  return o.n_taylor > 0 ? o.n_taylor : p.n_taylor;
}

}  // namespace

const PowerSumExpansion& power_sum_expansion(int m, int k) {
  static std::map<std::pair<int, int>, PowerSumExpansion> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({m, k});
  if (it != cache.end()) return it->second;
  PowerSumExpansion e;
  enumerate_compositions(m, k, 0, k, factorial(k), 0, e);
  return cache.emplace(std::make_pair(m, k), std::move(e)).first->second;
}

double core_integral(const DestLink& d, const PrsLink& sr, double lam,
                     double om, double lo, double hi, int n_taylor,
                     OutageDiag* diag) {
  if (!(hi > lo)) return 0.0;
  const double bd = d.b;
  const double bs = sr.b;

  // The expansion of exp(-bd lam / x) is evaluated at arguments up to
  // bd lam / lo. Beyond ~12 the alternating sum loses all precision in
  // doubles, and the configured order must keep the truncation tail tiny.
  const double series_arg = bd * lam / lo;
  if (series_arg > 12.0 || series_tail_rel(series_arg, n_taylor) > 1e-6) {
    if (diag) diag->quadrature_fallback = true;
    return core_integral_quadrature(d, sr, lam, om, lo, hi);
  }
  const double front = sr.K / factorial(sr.m - 1) * std::exp(-bd * om);

  double total = 0.0;
  for (int n = 0; n < d.m; ++n) {
    const int jlo = (om == 0.0) ? n : 0;
    for (int j = jlo; j <= n; ++j) {
      const double cnj = std::pow(bd, n) / factorial(n) * binom(n, j) *
                         std::pow(om, n - j) * std::pow(lam, j);
      if (cnj == 0.0) continue;
      double series = 0.0;
      double tl = 1.0;  // (-bd lam)^l / l!
      double last = 0.0;
      for (int l = 0; l <= n_taylor; ++l) {
        if (l > 0) tl *= -(bd * lam) / l;
        const int pw = j + l;
        const double kap = sr.m - pw;
        double inner = gamma_diff(kap, bs * lo, bs * hi);
        for (int k = 1; k < sr.K; ++k) {
          const double sgn = (k % 2 ? -1.0 : 1.0) * binom(sr.K - 1, k);
          const auto& exp_k = power_sum_expansion(sr.m, k);
          double acc = 0.0;
          for (const auto& t : exp_k.terms) {
            const double kap2 = kap + t.ibar;
            acc += t.weight * std::pow(k + 1.0, -kap2) *
                   gamma_diff(kap2, (k + 1.0) * bs * lo, (k + 1.0) * bs * hi);
          }
          inner += sgn * acc;
        }
        const double term = tl * std::pow(bs, pw) * inner;
        series += term;
        last = term;
      }
      if (diag) {
        const double rel =
            std::fabs(last) / (std::fabs(series) + 1e-300);
        diag->taylor_tail_rel = std::max(diag->taylor_tail_rel, rel);
        if (rel > 1e-4) diag->taylor_warning = true;
      }
      total += cnj * series;
    }
  }
  return front * total;
}

double outage_u1_icsi(const SystemParams& p, const DerivedThresholds& t,
                      const OutageOptions& opts, OutageDiag* diag) {
  if (p.lambda_hat_sr() <= 0.0 || p.lambda_hat_r1() <= 0.0)
    throw std::invalid_argument("outage_u1_icsi: estimated variances must stay positive");
  if (!t.feasible_u1) return 1.0;
  const BindingPair x2_side{t.lambda1, t.Omega1};
  const BindingPair x1_side{t.lambda2, t.Omega2 * opts.omega2_scale};
  const double surv =
      u1_event_integral(r1_link(p), sr_link(p), x2_side, x1_side, t.psi,
                        taylor_order(p, opts), diag);
  return clamp_probability(1.0 - surv, diag);
}

double outage_u2_icsi(const SystemParams& p, const DerivedThresholds& t,
                      const OutageOptions& opts, OutageDiag* diag) {
  if (p.lambda_hat_sr() <= 0.0 || p.lambda_hat_r2() <= 0.0)
    throw std::invalid_argument("outage_u2_icsi: estimated variances must stay positive");
  if (!t.feasible_u2) return 1.0;
  const double surv = core_integral(r2_link(p), sr_link(p), t.lambda1, t.Omega1,
                                    t.Delta1, kInf, taylor_order(p, opts), diag);
  return clamp_probability(1.0 - surv, diag);
}

double outage_u1_perfect(const SystemParams& p, const OutageOptions& opts,
                         OutageDiag* diag) {
  const SystemParams pp = p.perfect();
  const DerivedThresholds t = derive_thresholds(pp);
  if (!t.feasible_u2) return 1.0;
  const double den2 = pp.a2 - pp.a1 * t.gamma_th2;
  const double delta3 =
      std::max(t.gamma_th2 / (den2 * pp.rho), t.gamma_th1 / (pp.a1 * pp.rho));
  const double delta2 =
      std::max(t.lambda1, t.gamma_th1 * (1.0 - pp.alpha) /
                              (pp.a1 * pp.alpha * 2.0 * pp.mu * pp.rho));
  const double surv = core_integral(r1_link(pp), sr_link(pp), delta2, 0.0,
                                    delta3, kInf, taylor_order(pp, opts), diag);
  return clamp_probability(1.0 - surv, diag);
}

double outage_u2_perfect(const SystemParams& p, const OutageOptions& opts,
                         OutageDiag* diag) {
  const SystemParams pp = p.perfect();
  const DerivedThresholds t = derive_thresholds(pp);
  if (!t.feasible_u2) return 1.0;
  // With sigma_e2 = 0 the selected-link threshold Delta1 loses its CEE term.
  const double surv = core_integral(r2_link(pp), sr_link(pp), t.lambda1, 0.0,
                                    t.Delta1, kInf, taylor_order(pp, opts), diag);
  return clamp_probability(1.0 - surv, diag);
}

double outage_asymptotic(const SystemParams& p, AsyKind kind) {
  const bool perfect = (kind == AsyKind::u1_perfect || kind == AsyKind::u2_perfect);
  const SystemParams q = perfect ? p.perfect() : p;
  const DerivedThresholds t = derive_thresholds(q);
  const PrsLink sr = sr_link(q);
  const double msr_fact = factorial(q.m_sr);

  // Small-x CDF of one source->relay gain: (b x)^m / m!.
  auto cdf_small = [&](double x) {
    return std::min(1.0, std::pow(sr.b * x, sr.m) / msr_fact);
  };

  switch (kind) {
    case AsyKind::u1_icsi: {
      if (!t.feasible_u1) return 1.0;
      // At high SNR both selected-link limits collapse onto the CEE floors.
      const double a = std::max(t.Omega1, t.Omega2);
      const DestLink d = r1_link(q);
      const double sel = 1.0 - std::pow(cdf_small(a), q.K);
      return std::min(1.0, 1.0 - sel * gamma_survival_unit(d.m, d.b * a));
    }
    case AsyKind::u2_icsi: {
      if (!t.feasible_u2) return 1.0;
      const DestLink d = r2_link(q);
      const double sel = 1.0 - std::pow(cdf_small(t.Omega1), q.K);
      return std::min(1.0, 1.0 - sel * gamma_survival_unit(d.m, d.b * t.Omega1));
    }
    case AsyKind::u1_perfect: {
      if (!t.feasible_u2) return 1.0;
      const DestLink d = r1_link(q);
      const double den2 = q.a2 - q.a1 * t.gamma_th2;
      const double delta3 = std::max(t.gamma_th2 / (den2 * q.rho),
                                     t.gamma_th1 / (q.a1 * q.rho));
      const double delta2 =
          std::max(t.lambda1, t.gamma_th1 * (1.0 - q.alpha) /
                                  (q.a1 * q.alpha * 2.0 * q.mu * q.rho));
      const double kap = q.m_sr - q.m_r1;
      double bracket = gamma_diff(kap, sr.b * delta3, kInf);
      for (int k = 1; k < q.K; ++k) {
        const double sgn = (k % 2 ? -1.0 : 1.0) * binom(q.K - 1, k);
        const auto& exp_k = power_sum_expansion(q.m_sr, k);
        double acc = 0.0;
        for (const auto& term : exp_k.terms) {
          const double kap2 = kap + term.ibar;
          acc += term.weight * std::pow(k + 1.0, -kap2) *
                 gamma_diff(kap2, (k + 1.0) * sr.b * delta3, kInf);
        }
        bracket += sgn * acc;
      }
      const double second = std::pow(d.b * delta2, q.m_r1) * q.K /
                            (factorial(q.m_sr - 1) * factorial(q.m_r1)) *
                            std::pow(sr.b, q.m_r1) * bracket;
      return std::min(1.0, std::pow(cdf_small(delta3), q.K) + second);
    }
    case AsyKind::u2_perfect: {
      if (!t.feasible_u2) return 1.0;
      const DestLink d = r2_link(q);
      const double kap = q.m_sr - q.m_r2;
      const double chi = sr.b * t.Delta1;
      double bracket = gamma_diff(kap, chi, kInf);
      for (int k = 1; k < q.K; ++k) {
        const double sgn = (k % 2 ? -1.0 : 1.0) * binom(q.K - 1, k);
        const auto& exp_k = power_sum_expansion(q.m_sr, k);
        double acc = 0.0;
        for (const auto& term : exp_k.terms) {
          const double kap2 = kap + term.ibar;
          acc += term.weight * std::pow(k + 1.0, -kap2) *
                 gamma_diff(kap2, (k + 1.0) * chi, kInf);
        }
        bracket += sgn * acc;
      }
      const double second = std::pow(d.b * t.lambda1, q.m_r2) * q.K /
                            (factorial(q.m_sr - 1) * factorial(q.m_r2)) *
                            std::pow(sr.b, q.m_r2) * bracket;
      return std::min(1.0, std::pow(cdf_small(t.Delta1), q.K) + second);
    }
  }
  return 1.0;
}

double throughput_from_outage(const SystemParams& p, double pout1, double pout2) {
  const double half_time = 0.5 * (1.0 - p.alpha);
  return (1.0 - pout1) * p.r1 * half_time + (1.0 - pout2) * p.r2 * half_time;
}

double throughput_analytic(const SystemParams& p, CsiMode csi,
                           const OutageOptions& opts) {
  double p1, p2;
  if (csi == CsiMode::perfect) {
    p1 = outage_u1_perfect(p, opts);
    p2 = outage_u2_perfect(p, opts);
  } else {
    const DerivedThresholds t = derive_thresholds(p);
    p1 = outage_u1_icsi(p, t, opts);
    p2 = outage_u2_icsi(p, t, opts);
  }
  return throughput_from_outage(p, p1, p2);
}

}  // namespace noma
