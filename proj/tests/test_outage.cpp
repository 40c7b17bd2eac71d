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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "mc.hpp"
#include "outage.hpp"
#include "sinr.hpp"

using namespace noma;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial_d(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// ---- independent quadrature oracle ---------------------------------------
// Evaluates int_lo^hi S_d(lam/x + om) f_sel(x) dx on a fine fixed Simpson
// grid, using only the elementary gamma density/survival formulas. No code
// shared with the closed-form path under test.

double gamma_survival(int m, double b, double y) {
  const double t = b * y;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < m; ++k) {
    term *= t / k;
    sum += term;
  }
  return std::exp(-t) * sum;
}

double prs_pdf(int K, int m, double b, double x) {
  const double f1 = std::pow(b, m) * std::pow(x, m - 1) * std::exp(-b * x) /
                    factorial_d(m - 1);
  const double F1 = 1.0 - gamma_survival(m, b, x);
  return K * std::pow(F1, K - 1) * f1;
}

double core_integral_oracle(const DestLink& d, const PrsLink& sr, double lam,
                            double om, double lo, double hi) {
  const double cap = std::isfinite(hi)
                         ? hi
                         : lo + (60.0 + 10.0 * sr.m) / sr.b + 5.0 * lo;
  const int n = 4000000;  // even
  const double h = (cap - lo) / n;
  auto f = [&](double x) {
    return gamma_survival(d.m, d.b, lam / x + om) * prs_pdf(sr.K, sr.m, sr.b, x);
  };
  double acc = f(lo) + f(cap);
  for (int i = 1; i < n; ++i) acc += f(lo + i * h) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Direct numeric evaluation of the U1 outage event from its definition
// (selected-link threshold + the pointwise max of the two U1 constraints).
double outage_u1_oracle(const SystemParams& p, const DerivedThresholds& t) {
  if (!t.feasible_u1) return 1.0;
  const DestLink d{p.m_r1, p.m_r1 / p.lambda_hat_r1()};
  const PrsLink sr{p.K, p.m_sr, p.m_sr / p.lambda_hat_sr()};
  const double cap = t.psi + (60.0 + 10.0 * sr.m) / sr.b + 5.0 * t.psi;
  const int n = 4000000;
  const double h = (cap - t.psi) / n;
  auto f = [&](double x) {
    const double need = std::max(t.lambda1 / x + t.Omega1, t.lambda2 / x + t.Omega2);
    return gamma_survival(d.m, d.b, need) * prs_pdf(sr.K, sr.m, sr.b, x);
  };
  double acc = f(t.psi) + f(cap);
  for (int i = 1; i < n; ++i) acc += f(t.psi + i * h) * ((i % 2) ? 4.0 : 2.0);
  return 1.0 - acc * h / 3.0;
}

SystemParams with_rho_db(double db) {
  SystemParams p;
  p.rho = std::pow(10.0, db / 10.0);
  return p;
}

}  // namespace

TEST_CASE("multinomial expansion equals direct polynomial expansion") {
  // (sum_{n<m} (b x)^n / n!)^k expanded by repeated polynomial products
  for (int m = 1; m <= 3; ++m) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<double> poly{1.0};  // coefficients in (b x)
      std::vector<double> base(m);
      for (int n = 0; n < m; ++n) base[n] = 1.0 / factorial_d(n);
      for (int rep = 0; rep < k; ++rep) {
        std::vector<double> next(poly.size() + m - 1, 0.0);
        for (size_t i = 0; i < poly.size(); ++i)
          for (int n = 0; n < m; ++n) next[i + n] += poly[i] * base[n];
        poly = next;
      }
      std::map<int, double> from_terms;
      const auto& e = power_sum_expansion(m, k);
      for (const auto& term : e.terms) from_terms[term.ibar] += term.weight;
      for (size_t i = 0; i < poly.size(); ++i) {
        CAPTURE(m);
        CAPTURE(k);
        CAPTURE(i);
        const double w = from_terms.count((int)i) ? from_terms[(int)i] : 0.0;
        CHECK(w == doctest::Approx(poly[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("core integral matches the quadrature oracle") {
  const DestLink d{2, 2.0 / 0.99};
  const PrsLink sr2{2, 2, 2.0 / 0.99};
  SUBCASE("semi-infinite upper limit") {
    const double got = core_integral(d, sr2, 0.02, 0.1, 0.05, kInf, 25, nullptr);
    const double want = core_integral_oracle(d, sr2, 0.02, 0.1, 0.05, kInf);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
  }
  SUBCASE("finite window") {
    const double got = core_integral(d, sr2, 0.015, 0.08, 0.1, 0.9, 25, nullptr);
    const double want = core_integral_oracle(d, sr2, 0.015, 0.08, 0.1, 0.9);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
  }
  SUBCASE("zero offset (ideal-knowledge shape)") {
    const double got = core_integral(d, sr2, 0.03, 0.0, 0.02, kInf, 25, nullptr);
    const double want = core_integral_oracle(d, sr2, 0.03, 0.0, 0.02, kInf);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
  }
  SUBCASE("more relays, higher shape") {
    const DestLink d3{3, 3.0 / 0.7};
    const PrsLink sr4{4, 3, 3.0 / 0.95};
    const double got = core_integral(d3, sr4, 0.01, 0.05, 0.04, kInf, 25, nullptr);
    const double want = core_integral_oracle(d3, sr4, 0.01, 0.05, 0.04, kInf);
    CHECK(got == doctest::Approx(want).epsilon(1e-7));
  }
  SUBCASE("single relay has no correction sum") {
    const PrsLink sr1{1, 2, 2.0 / 0.99};
    const double got = core_integral(d, sr1, 0.02, 0.1, 0.05, kInf, 25, nullptr);
    const double want = core_integral_oracle(d, sr1, 0.02, 0.1, 0.05, kInf);
    CHECK(got == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("U1 closed form matches the event-definition oracle") {
  for (double db : {5.0, 10.0, 20.0, 30.0}) {
    CAPTURE(db);
    const SystemParams p = with_rho_db(db);
    const auto t = derive_thresholds(p);
    const double got = outage_u1_icsi(p, t);
    const double want = outage_u1_oracle(p, t);
    CHECK(got == doctest::Approx(want).epsilon(5e-7));
  }
}

TEST_CASE("U2 closed form matches the core-integral oracle") {
  for (double db : {5.0, 20.0, 35.0}) {
    CAPTURE(db);
    const SystemParams p = with_rho_db(db);
    const auto t = derive_thresholds(p);
    const DestLink d{p.m_r2, p.m_r2 / p.lambda_hat_r2()};
    const PrsLink sr{p.K, p.m_sr, p.m_sr / p.lambda_hat_sr()};
    const double got = outage_u2_icsi(p, t);
    const double want =
        1.0 - core_integral_oracle(d, sr, t.lambda1, t.Omega1, t.Delta1, kInf);
    CHECK(got == doctest::Approx(want).epsilon(5e-7));
  }
}

TEST_CASE("degenerate thresholds pin the outage to one") {
  SystemParams p;
  p.alpha = 0.5;  // gamma_th = 3 > a2/a1
  const auto t = derive_thresholds(p);
  CHECK(outage_u1_icsi(p, t) == 1.0);
  CHECK(outage_u2_icsi(p, t) == 1.0);
  CHECK(outage_u1_perfect(p) == 1.0);
  CHECK(outage_u2_perfect(p) == 1.0);
  CHECK(outage_asymptotic(p, AsyKind::u1_icsi) == 1.0);
  CHECK(outage_asymptotic(p, AsyKind::u2_icsi) == 1.0);
}

TEST_CASE("imperfect formulas collapse to the perfect ones at zero impairments") {
  for (double db = 0.0; db <= 45.0; db += 5.0) {
    SystemParams p = with_rho_db(db);
    p.sigma_e2 = 0.0;
    p.beta = 0.0;
    const auto t = derive_thresholds(p);
    CAPTURE(db);
    CHECK(std::fabs(outage_u1_icsi(p, t) - outage_u1_perfect(p)) < 1e-6);
    CHECK(std::fabs(outage_u2_icsi(p, t) - outage_u2_perfect(p)) < 1e-6);
  }
}

TEST_CASE("analytic outage matches Monte-Carlo at the defaults") {
  McConfig mc;
  mc.n_trials = 2000000;
  mc.seed = 404;
  for (double db : {10.0, 20.0}) {
    CAPTURE(db);
    const SystemParams p = with_rho_db(db);
    const auto t = derive_thresholds(p);
    const auto [u1, u2] = mc_outage(p, t, mc);
    const double tol1 = std::max(0.005, 3.0 * u1.half_width);
    const double tol2 = std::max(0.005, 3.0 * u2.half_width);
    CHECK(std::fabs(outage_u1_icsi(p, t) - u1.mean) < tol1);
    CHECK(std::fabs(outage_u2_icsi(p, t) - u2.mean) < tol2);

    const SystemParams pp = p.perfect();
    const auto tp = derive_thresholds(pp);
    const auto [v1, v2] = mc_outage(pp, tp, mc);
    CHECK(std::fabs(outage_u1_perfect(p) - v1.mean) <
          std::max(0.005, 3.0 * v1.half_width));
    CHECK(std::fabs(outage_u2_perfect(p) - v2.mean) <
          std::max(0.005, 3.0 * v2.half_width));
  }
}

TEST_CASE("imperfect-case floors at very high SNR") {
  const SystemParams p = with_rho_db(60.0);
  const auto t = derive_thresholds(p);
  // §-defaults floor values; regression anchors from a 30-digit evaluation
  // of the limiting event probabilities.
  CHECK(outage_u1_icsi(p, t) == doctest::Approx(0.038098394579).epsilon(2e-3));
  CHECK(outage_u2_icsi(p, t) == doctest::Approx(0.124681416906).epsilon(2e-3));
  // the asymptotic expressions are SNR-free and land within 10% of the floors
  const double a1 = outage_asymptotic(p, AsyKind::u1_icsi);
  const double a2 = outage_asymptotic(p, AsyKind::u2_icsi);
  CHECK(a1 == doctest::Approx(0.0387283048377).epsilon(1e-9));
  CHECK(a2 == doctest::Approx(0.125254627463).epsilon(1e-9));
  CHECK(std::fabs(a1 - outage_u1_icsi(p, t)) / outage_u1_icsi(p, t) < 0.10);
  CHECK(std::fabs(a2 - outage_u2_icsi(p, t)) / outage_u2_icsi(p, t) < 0.10);
}

TEST_CASE("asymptotic imperfect expressions are SNR-independent") {
  SystemParams a = with_rho_db(40.0);
  SystemParams b = with_rho_db(60.0);
  CHECK(outage_asymptotic(a, AsyKind::u1_icsi) ==
        outage_asymptotic(b, AsyKind::u1_icsi));
  CHECK(outage_asymptotic(a, AsyKind::u2_icsi) ==
        outage_asymptotic(b, AsyKind::u2_icsi));
}

TEST_CASE("perfect asymptote tracks the exact curve at high SNR") {
  for (double db : {35.0, 45.0}) {
    CAPTURE(db);
    const SystemParams p = with_rho_db(db);
    const double asy = outage_asymptotic(p, AsyKind::u1_perfect);
    const double exact = outage_u1_perfect(p);
    CHECK(std::fabs(asy - exact) / exact < 0.25);
    const double asy2 = outage_asymptotic(p, AsyKind::u2_perfect);
    const double exact2 = outage_u2_perfect(p);
    CHECK(std::fabs(asy2 - exact2) / exact2 < 0.25);
  }
}

TEST_CASE("diversity order of the perfect U1 asymptote") {
  const SystemParams a = with_rho_db(30.0);
  const SystemParams b = with_rho_db(40.0);
  const double slope = (std::log10(outage_asymptotic(b, AsyKind::u1_perfect)) -
                        std::log10(outage_asymptotic(a, AsyKind::u1_perfect)));
  // one decade of SNR; diversity min(K m_sr, m_r1) = 2 (log-corrected)
  const double order = std::min(a.K * a.m_sr, a.m_r1);
  CHECK(std::fabs(-slope - order) / order < 0.15);
}

TEST_CASE("outage is monotone non-increasing in SNR and in K") {
  double prev1 = 1.1, prev2 = 1.1, prev1p = 1.1, prev2p = 1.1;
  for (double db = 5.0; db <= 40.0; db += 5.0) {
    const SystemParams p = with_rho_db(db);
    const auto t = derive_thresholds(p);
    const double o1 = outage_u1_icsi(p, t);
    const double o2 = outage_u2_icsi(p, t);
    const double o1p = outage_u1_perfect(p);
    const double o2p = outage_u2_perfect(p);
    CAPTURE(db);
    CHECK(o1 <= prev1 + 1e-9);
    CHECK(o2 <= prev2 + 1e-9);
    CHECK(o1p <= prev1p + 1e-9);
    CHECK(o2p <= prev2p + 1e-9);
    prev1 = o1;
    prev2 = o2;
    prev1p = o1p;
    prev2p = o2p;
  }
  double prevK = 1.1;
  for (int K : {1, 2, 3, 5}) {
    SystemParams p = with_rho_db(20.0);
    p.K = K;
    const double o = outage_u1_perfect(p);
    CAPTURE(K);
    CHECK(o <= prevK + 1e-9);
    prevK = o;
  }
}

TEST_CASE("series health: raw values inside the truncation band") {
  for (double db = 0.0; db <= 60.0; db += 10.0) {
    const SystemParams p = with_rho_db(db);
    const auto t = derive_thresholds(p);
    OutageDiag d1, d2;
    (void)outage_u1_icsi(p, t, {}, &d1);
    (void)outage_u2_icsi(p, t, {}, &d2);
    CAPTURE(db);
    CHECK(d1.raw > -0.02);
    CHECK(d1.raw < 1.02);
    CHECK(d2.raw > -0.02);
    CHECK(d2.raw < 1.02);
    CHECK(!d1.taylor_warning);
    CHECK(!d2.taylor_warning);
    CHECK(d1.taylor_tail_rel < 1e-8);
  }
}

TEST_CASE("truncation order controls the series tail") {
  const SystemParams p = with_rho_db(10.0);
  const auto t = derive_thresholds(p);
  OutageDiag coarse, fine;
  OutageOptions oc;
  oc.n_taylor = 15;
  OutageOptions of;
  of.n_taylor = 30;
  const double pc = outage_u1_icsi(p, t, oc, &coarse);
  const double pf = outage_u1_icsi(p, t, of, &fine);
  CHECK(!coarse.quadrature_fallback);
  CHECK(coarse.taylor_tail_rel > fine.taylor_tail_rel);
  CHECK(std::fabs(pc - pf) < 1e-6);
  // an order too small for the series argument routes to quadrature
  OutageOptions bad;
  bad.n_taylor = 3;
  OutageDiag d3;
  const double pq = outage_u1_icsi(p, t, bad, &d3);
  CHECK(d3.quadrature_fallback);
  CHECK(std::fabs(pq - pf) < 1e-6);
}

TEST_CASE("small harvesting fractions route through the quadrature fallback") {
  // At alpha = 0.1 the series argument is ~10 for the U2 link and the
  // closed form would lose the value entirely; the fallback must land on
  // the Monte-Carlo truth.
  SystemParams p;
  p.alpha = 0.1;
  const auto t = derive_thresholds(p);
  OutageDiag d2, d2p;
  const double o2 = outage_u2_icsi(p, t, {}, &d2);
  CHECK(d2.quadrature_fallback);
  const double o2p = outage_u2_perfect(p, {}, &d2p);
  CHECK(d2p.quadrature_fallback);
  CHECK(o2p < o2);  // perfect knowledge can only help
  McConfig mc;
  mc.n_trials = 2000000;
  mc.seed = 515;
  const auto [u1, u2] = mc_outage(p, t, mc);
  CHECK(std::fabs(o2 - u2.mean) < std::max(0.005, 3.0 * u2.half_width));
  CHECK(std::fabs(outage_u1_icsi(p, t) - u1.mean) <
        std::max(0.005, 3.0 * u1.half_width));
}

TEST_CASE("omega2 corruption hook moves U1 but not U2") {
  const SystemParams p = with_rho_db(20.0);
  const auto t = derive_thresholds(p);
  OutageOptions bad;
  bad.omega2_scale = 1.5;
  CHECK(outage_u1_icsi(p, t, bad) != doctest::Approx(outage_u1_icsi(p, t)).epsilon(1e-6));
  CHECK(outage_u2_icsi(p, t, bad) == doctest::Approx(outage_u2_icsi(p, t)).epsilon(1e-15));
}

TEST_CASE("throughput at the extremes and at defaults") {
  SystemParams p;
  CHECK(throughput_from_outage(p, 1.0, 1.0) == 0.0);
  CHECK(throughput_from_outage(p, 0.0, 0.0) == doctest::Approx(0.325).epsilon(1e-14));
  const double tau = throughput_analytic(p, CsiMode::imperfect);
  CHECK(tau > 0.0);
  CHECK(tau < 0.325);
}
