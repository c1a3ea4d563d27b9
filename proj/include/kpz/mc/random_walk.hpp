#pragma once

// Mutually avoiding simple random walks on Z^2: L walkers start side by side
// on the x axis and survive while their path sets stay pairwise disjoint.
// P_L(t) ~ t^(-zeta_L).

#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "kpz/errors.hpp"
#include "kpz/mc/fit.hpp"
#include "kpz/mc/parallel.hpp"
#include "kpz/mc/rng.hpp"

namespace kpz::mc {

struct LatticePoint {
  std::int32_t x = 0;
  std::int32_t y = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct WalkPath {
  LatticePoint origin;
  std::vector<LatticePoint> sites;  // sites.front() == origin
  std::size_t steps() const { return sites.empty() ? 0 : sites.size() - 1; }
};

inline constexpr std::array<LatticePoint, 4> kSquareSteps{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

/// Geometric grid 1, 2^(1/4), ... rounded and deduplicated, ending at t_max.
inline std::vector<std::int64_t> log_checkpoints(std::int64_t t_max, int per_octave = 4) {
  std::vector<std::int64_t> out;
  for (int k = 0;; ++k) {
    const auto t = static_cast<std::int64_t>(std::llround(std::pow(2.0, static_cast<double>(k) / per_octave)));
    if (t > t_max) break;
    if (out.empty() || out.back() != t) out.push_back(t);
  }
  if (out.empty() || out.back() != t_max) out.push_back(t_max);
  return out;
}

struct RwResult {
  FitResult fit;  // exponent = zeta estimate (minus the log-log slope)
  int L = 0;
  std::int64_t trials = 0;
  std::vector<std::int64_t> checkpoints;
  std::vector<std::int64_t> survivors;  // trials alive after each checkpoint
};

namespace detail {

inline std::uint64_t pack(LatticePoint p) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) | static_cast<std::uint32_t>(p.y);
}

/// Number of steps every walker completed with all paths disjoint (t_max if it never failed).
inline std::int64_t rw_survival_time(int L, std::int64_t t_max, PhiloxStream& rng,
                                     std::unordered_map<std::uint64_t, int>& owner) {
  owner.clear();
  std::vector<LatticePoint> pos(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) {
    pos[static_cast<std::size_t>(i)] = {i, 0};
    owner.emplace(pack(pos[static_cast<std::size_t>(i)]), i);
  }
  for (std::int64_t t = 1; t <= t_max; ++t) {
    for (int i = 0; i < L; ++i) {
      auto& p = pos[static_cast<std::size_t>(i)];
      const LatticePoint d = kSquareSteps[rng() >> 30];
      p = {p.x + d.x, p.y + d.y};
      const auto [it, inserted] = owner.emplace(pack(p), i);
      if (!inserted && it->second != i) return t - 1;
    }
  }
  return t_max;
}

}  // namespace detail

inline RwResult rw_nonintersection(int L, std::int64_t t_max, std::int64_t trials, std::uint64_t seed,
                                   unsigned threads = 1) {
  if (L < 2) throw DomainError("rw_nonintersection: L >= 2");
  if (t_max < 2 || trials < 1) throw DomainError("rw_nonintersection: t_max >= 2, trials >= 1");

  std::vector<std::int64_t> lifetime(static_cast<std::size_t>(trials));
  const unsigned workers = resolve_threads(threads);
  std::vector<std::unordered_map<std::uint64_t, int>> maps(workers);
  parallel_trials(lifetime.size(), workers, [&](std::size_t trial, unsigned w) {
    PhiloxStream rng(seed, trial);
    lifetime[trial] = detail::rw_survival_time(L, t_max, rng, maps[w]);
  });

  RwResult res;
  res.L = L;
  res.trials = trials;
  res.checkpoints = log_checkpoints(t_max);
  res.survivors.assign(res.checkpoints.size(), 0);
  for (std::int64_t life : lifetime)
    for (std::size_t k = 0; k < res.checkpoints.size() && life >= res.checkpoints[k]; ++k) ++res.survivors[k];

  if (res.survivors.size() < 2 || res.survivors[1] == 0)
    throw StatisticsError("insufficient statistics: all trials died before the second checkpoint");

  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < res.checkpoints.size() && res.survivors[k] > 0; ++k) {
    xs.push_back(static_cast<double>(res.checkpoints[k]));
    ys.push_back(static_cast<double>(res.survivors[k]) / static_cast<double>(trials));
  }
  res.fit = fit_power_law(xs, ys);
  res.fit.exponent = -res.fit.exponent;
  res.fit.seed = seed;
  return res;
}

}  // namespace kpz::mc
