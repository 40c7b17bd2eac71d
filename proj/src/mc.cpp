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

#include "mc.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "sinr.hpp"

namespace noma {

namespace {

// Runs one accumulator value per fixed block of trials; blocks are handed to
// workers through an atomic cursor and reduced on the caller thread in block
// order, which pins the floating-point summation tree.
template <typename Block, typename TrialFn>
std::vector<Block> run_blocks(const McConfig& cfg, const TrialFn& fn) {
  const std::uint64_t n = cfg.n_trials;
  const std::uint64_t bs = std::max<std::uint32_t>(cfg.batch_size, 1);
  const std::uint64_t n_blocks = (n + bs - 1) / bs;
  std::vector<Block> blocks(n_blocks);

  int workers = cfg.n_workers > 0
                    ? cfg.n_workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n_blocks));

  std::atomic<std::uint64_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      const std::uint64_t b = cursor.fetch_add(1);
      if (b >= n_blocks) return;
      Block acc{};
      const std::uint64_t lo = b * bs;
      const std::uint64_t hi = std::min(n, lo + bs);
      for (std::uint64_t trial = lo; trial < hi; ++trial) {
        RngStream rng(cfg.seed, trial);
        fn(rng, acc);
      }
      blocks[b] = acc;
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return blocks;
}

struct CountPair {
  std::uint64_t u1 = 0, u2 = 0;
};

struct SumPair {
  double s1 = 0.0, s2 = 0.0, q1 = 0.0, q2 = 0.0;
};

McEstimate wilson(std::uint64_t hits, std::uint64_t n, double conf) {
  McEstimate e;
  e.n = n;
  const double z = normal_quantile_two_sided(conf);
  const double phat = static_cast<double>(hits) / static_cast<double>(n);
  const double z2n = z * z / static_cast<double>(n);
  const double hw = z *
                    std::sqrt(phat * (1.0 - phat) / static_cast<double>(n) +
                              z2n / (4.0 * static_cast<double>(n))) /
                    (1.0 + z2n);
  e.mean = phat;
  e.half_width = hw;
  return e;
}

McEstimate mean_ci(double sum, double sumsq, std::uint64_t n, double conf) {
  McEstimate e;
  e.n = n;
  const double dn = static_cast<double>(n);
  e.mean = sum / dn;
  const double var = std::max(0.0, (sumsq - sum * sum / dn) / (dn - 1.0));
  e.half_width = normal_quantile_two_sided(conf) * std::sqrt(var / dn);
  return e;
}

}  // namespace

double normal_quantile_two_sided(double confidence_level) {
  if (!(confidence_level > 0.0 && confidence_level < 1.0))
    throw std::invalid_argument("confidence_level must lie in (0, 1)");
  const double target = 1.0 - confidence_level;  // erfc(z/sqrt(2)) = 1 - conf
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::erfc(mid / std::sqrt(2.0)) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

McEstimate mc_proportion(const McConfig& cfg,
                         const std::function<bool(RngStream&)>& trial) {
  struct Block {
    std::uint64_t hits = 0;
  };
  const auto blocks = run_blocks<Block>(
      cfg, [&](RngStream& rng, Block& b) { b.hits += trial(rng) ? 1 : 0; });
  std::uint64_t hits = 0;
  for (const auto& b : blocks) hits += b.hits;
  return wilson(hits, cfg.n_trials, cfg.confidence_level);
}

std::pair<McEstimate, McEstimate> mc_outage(const SystemParams& p,
                                            const DerivedThresholds& t,
                                            const McConfig& cfg) {
  const auto blocks =
      run_blocks<CountPair>(cfg, [&](RngStream& rng, CountPair& b) {
        const ChannelDraw d = draw_with_prs(p, rng);
        const SinrSet s = compute_sinrs(p, d);
        const auto [o1, o2] = outage_events(t, s);
        b.u1 += o1 ? 1 : 0;
        b.u2 += o2 ? 1 : 0;
      });
  CountPair total;
  for (const auto& b : blocks) {
    total.u1 += b.u1;
    total.u2 += b.u2;
  }
  return {wilson(total.u1, cfg.n_trials, cfg.confidence_level),
          wilson(total.u2, cfg.n_trials, cfg.confidence_level)};
}

std::pair<McEstimate, McEstimate> mc_rates(const SystemParams& p,
                                           const McConfig& cfg) {
  const auto blocks =
      run_blocks<SumPair>(cfg, [&](RngStream& rng, SumPair& b) {
        const ChannelDraw d = draw_with_prs(p, rng);
        const SinrSet s = compute_sinrs(p, d);
        const auto [r1, r2] = instantaneous_rates(p, s);
        b.s1 += r1;
        b.q1 += r1 * r1;
        b.s2 += r2;
        b.q2 += r2 * r2;
      });
  SumPair total;
  for (const auto& b : blocks) {
    total.s1 += b.s1;
    total.q1 += b.q1;
    total.s2 += b.s2;
    total.q2 += b.q2;
  }
  return {mean_ci(total.s1, total.q1, cfg.n_trials, cfg.confidence_level),
          mean_ci(total.s2, total.q2, cfg.n_trials, cfg.confidence_level)};
}

McEstimate mc_throughput(const SystemParams& p, const DerivedThresholds& t,
                         const McConfig& cfg) {
  const auto [u1, u2] = mc_outage(p, t, cfg);
  const double half_time = 0.5 * (1.0 - p.alpha);
  McEstimate e;
  e.n = cfg.n_trials;
  e.mean = (1.0 - u1.mean) * p.r1 * half_time + (1.0 - u2.mean) * p.r2 * half_time;
  e.half_width = p.r1 * half_time * u1.half_width + p.r2 * half_time * u2.half_width;
  return e;
}

}  // namespace noma
