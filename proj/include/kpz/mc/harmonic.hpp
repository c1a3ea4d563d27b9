#pragma once

// Harmonic measure of a percolation cluster by random walkers. Walkers start
// uniformly on the circle of radius 2 R_c (R_c = cluster radius), reflect at
// 4 R_c, and are absorbed on the first cluster site they step onto. Far from
// the cluster a walker jumps to a uniform point on the largest circle known
// to be cluster-free (walk on spheres); within two lattice units it takes
// single lattice steps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <unordered_map>
#include <vector>

#include "kpz/errors.hpp"
#include "kpz/mc/fit.hpp"
#include "kpz/mc/parallel.hpp"
#include "kpz/mc/percolation.hpp"
#include "kpz/mc/rng.hpp"

namespace kpz::mc {

struct HarmonicOptions {
  double launch_ratio = 2.0;
  double outer_ratio = 4.0;  // reflecting circle, in units of R_c
  std::uint64_t step_budget = 2'000'000;
  unsigned threads = 1;
};

struct HitMap {
  std::vector<std::int64_t> hits;  // aligned with the cluster's site list
  std::int64_t walkers = 0;
  std::int64_t absorbed = 0;
  std::int64_t discarded = 0;  // step budget exceeded
  double cluster_radius = 0.0;
};

namespace detail {

/// Nearest triangular-lattice site to a Euclidean point (cube rounding).
inline Site nearest_site(double x, double y) {
  const double fr = y / kSqrt3Half;
  const double fq = x - 0.5 * fr;
  const double fs = -fq - fr;
  double rq = std::round(fq), rr = std::round(fr), rs = std::round(fs);
  const double dq = std::abs(rq - fq), dr = std::abs(rr - fr), ds = std::abs(rs - fs);
  if (dq > dr && dq > ds) {
    rq = -rr - rs;
  } else if (dr > ds) {
    rr = -rq - rs;
  }
  return {static_cast<std::int32_t>(rq), static_cast<std::int32_t>(rr)};
}

/// Lattice distance to the cluster near it, and the cluster index of each site.
class HarmonicField {
 public:
  HarmonicField(const PercCluster& cl, double rc, int margin) {
    half_ = static_cast<int>(std::ceil((rc + margin) / kSqrt3Half)) + 2;
    width_ = 2 * half_ + 1;
    const std::size_t cells = static_cast<std::size_t>(width_) * static_cast<std::size_t>(width_);
    dist_.assign(cells, std::numeric_limits<std::uint16_t>::max());
    index_.assign(cells, -1);
    std::deque<Site> queue;
    for (std::size_t i = 0; i < cl.sites.size(); ++i) {
      const Site s = cl.sites[i];
      dist_[idx(s)] = 0;
      index_[idx(s)] = static_cast<std::int32_t>(i);
      queue.push_back(s);
    }
    while (!queue.empty()) {
      const Site s = queue.front();
      queue.pop_front();
      const std::uint16_t d = dist_[idx(s)];
      if (d + 1 >= std::numeric_limits<std::uint16_t>::max()) continue;
      for (Site step : kTriSteps) {
        const Site n = s + step;
        if (in_grid(n) && dist_[idx(n)] > d + 1) {
          dist_[idx(n)] = static_cast<std::uint16_t>(d + 1);
          queue.push_back(n);
        }
      }
    }
  }

  bool in_grid(Site s) const { return std::abs(s.q) <= half_ && std::abs(s.r) <= half_; }
  /// Lattice distance, or -1 outside the grid.
  int lattice_distance(Site s) const { return in_grid(s) ? dist_[idx(s)] : -1; }
  std::int32_t cluster_index(Site s) const { return in_grid(s) ? index_[idx(s)] : -1; }

 private:
  std::size_t idx(Site s) const {
    return static_cast<std::size_t>(s.q + half_) + static_cast<std::size_t>(s.r + half_) * static_cast<std::size_t>(width_);
  }
  int half_ = 0, width_ = 0;
  std::vector<std::uint16_t> dist_;
  std::vector<std::int32_t> index_;
};

/// Runs one walker; returns the absorbing cluster index or -1 when discarded.
inline std::int32_t run_walker(const HarmonicField& field, double rc, const HarmonicOptions& opt, PhiloxStream& rng) {
  const double r_out = opt.outer_ratio * rc;
  const double phi0 = 2.0 * std::numbers::pi * rng.uniform();
  Site s = nearest_site(opt.launch_ratio * rc * std::cos(phi0), opt.launch_ratio * rc * std::sin(phi0));
  for (std::uint64_t step = 0; step < opt.step_budget; ++step) {
    const double x = euclid_x(s), y = euclid_y(s);
    const double r = std::hypot(x, y);
    // Every cluster site lies within rc of the origin, and Euclidean
    // distance is at least sqrt(3)/2 times lattice distance.
    double free_radius = r - rc;
    const int ld = field.lattice_distance(s);
    if (ld >= 0) free_radius = std::max(free_radius, ld * kSqrt3Half);
    const double jump = std::min(free_radius - 1.0, r_out);
    if (jump >= 2.0) {
      const double phi = 2.0 * std::numbers::pi * rng.uniform();
      double nx = x + jump * std::cos(phi), ny = y + jump * std::sin(phi);
      const double nr = std::hypot(nx, ny);
      if (nr > r_out) {
        const double scale = (2.0 * r_out - nr) / nr;  // mirror across the outer circle
        nx *= scale;
        ny *= scale;
      }
      const Site t = nearest_site(nx, ny);
      if (field.cluster_index(t) < 0) s = t;  // a mirrored landing on the cluster is rejected
      continue;
    }
    const Site t = s + kTriSteps[rng.below(6)];
    const std::int32_t hit = field.cluster_index(t);
    if (hit >= 0) return hit;
    if (std::hypot(euclid_x(t), euclid_y(t)) <= r_out) s = t;
  }
  return -1;
}

}  // namespace detail

/// Hit counts per cluster site. Walker w uses stream w of `seed`; per-worker
/// integer tallies are summed, so counts do not depend on the thread count.
inline HitMap harmonic_measure(const PercCluster& cl, std::int64_t walkers, std::uint64_t seed,
                               const HarmonicOptions& opt = {}) {
  if (cl.sites.empty()) throw DomainError("harmonic_measure: empty cluster");
  if (walkers < 1) throw DomainError("harmonic_measure: walkers >= 1");
  if (!(opt.outer_ratio > opt.launch_ratio && opt.launch_ratio > 1.0))
    throw DomainError("harmonic_measure: need 1 < launch_ratio < outer_ratio");
  HitMap map;
  map.walkers = walkers;
  map.cluster_radius = std::max(1.0, cl.max_radius);
  const double rc = map.cluster_radius + 0.5;
  const detail::HarmonicField field(cl, rc, 8);

  const unsigned workers = resolve_threads(opt.threads);
  std::vector<std::vector<std::int64_t>> tallies(workers, std::vector<std::int64_t>(cl.sites.size(), 0));
  std::vector<std::int64_t> discards(workers, 0);
  parallel_trials(static_cast<std::size_t>(walkers), workers, [&](std::size_t w, unsigned worker) {
    PhiloxStream rng(seed, w);
    const std::int32_t hit = detail::run_walker(field, rc, opt, rng);
    if (hit < 0) {
      ++discards[worker];
    } else {
      ++tallies[worker][static_cast<std::size_t>(hit)];
    }
  });
  map.hits.assign(cl.sites.size(), 0);
  for (unsigned w = 0; w < workers; ++w) {
    for (std::size_t i = 0; i < map.hits.size(); ++i) map.hits[i] += tallies[w][i];
    map.discarded += discards[w];
  }
  map.absorbed = walkers - map.discarded;
  return map;
}

struct MomentEstimate {
  double n = 0.0;
  FitResult tau;  // slope of ln <Z_n(r)> against ln r
  double D = std::numeric_limits<double>::quiet_NaN();
  double D_error = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> box_sizes;
  std::vector<double> z_mean;
};

namespace detail {

/// Unbiased estimate of sum_box mu^n for integer n >= 2 (falling factorials of
/// the counts); the plain power of frequencies otherwise.
inline double box_moment(const std::vector<std::int64_t>& counts, std::int64_t total, double n) {
  const double N = static_cast<double>(total);
  const bool integer = n >= 2.0 && n == std::floor(n) && n <= 16.0 && total > static_cast<std::int64_t>(n);
  double z = 0.0;
  for (std::int64_t c : counts) {
    if (c == 0) continue;
    if (integer) {
      double term = 1.0;
      for (int k = 0; k < static_cast<int>(n); ++k) term *= (static_cast<double>(c) - k) / (N - k);
      z += term;
    } else {
      z += std::pow(static_cast<double>(c) / N, n);
    }
  }
  return z;
}

}  // namespace detail

/// Box sizes 2, 2^(1.25), ... up to r_max, rounded and unique.
inline std::vector<double> moment_box_sizes(double r_max) {
  std::vector<double> out;
  for (int k = 4;; ++k) {
    const double r = std::round(std::pow(2.0, 0.25 * k));
    if (r > r_max) break;
    if (out.empty() || out.back() != r) out.push_back(r);
  }
  return out;
}

/// tau(n) from cluster-averaged box moments Z_n(r) = sum mu(box_r)^n, r = 2 .. R/2
/// with R the smallest cluster radius; D(n) = tau(n)/(n - 1).
inline std::vector<MomentEstimate> harmonic_moments(const std::vector<PercCluster>& clusters,
                                                    const std::vector<HitMap>& maps, const std::vector<double>& n_list) {
  if (clusters.empty() || clusters.size() != maps.size())
    throw DomainError("harmonic_moments: need one hit map per cluster");
  double r_min_cluster = std::numeric_limits<double>::infinity();
  for (const auto& m : maps) r_min_cluster = std::min(r_min_cluster, m.cluster_radius);
  const std::vector<double> sizes = moment_box_sizes(r_min_cluster / 2.0);
  if (sizes.size() < 5) throw StatisticsError("insufficient range: clusters too small for box moments");

  std::vector<MomentEstimate> out;
  for (double n : n_list) {
    MomentEstimate est;
    est.n = n;
    est.box_sizes = sizes;
    est.z_mean.assign(sizes.size(), 0.0);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (maps[c].absorbed <= 0) throw StatisticsError("harmonic_moments: a cluster absorbed no walker");
      for (std::size_t k = 0; k < sizes.size(); ++k) {
        std::unordered_map<std::uint64_t, std::int64_t> boxes;
        for (std::size_t i = 0; i < clusters[c].sites.size(); ++i) {
          if (maps[c].hits[i] == 0) continue;
          const auto bx = static_cast<std::int64_t>(std::floor(euclid_x(clusters[c].sites[i]) / sizes[k]));
          const auto by = static_cast<std::int64_t>(std::floor(euclid_y(clusters[c].sites[i]) / sizes[k]));
          boxes[(static_cast<std::uint64_t>(bx) << 32) ^ static_cast<std::uint32_t>(by)] += maps[c].hits[i];
        }
        // Deterministic order for the floating-point sum.
        std::vector<std::pair<std::uint64_t, std::int64_t>> sorted(boxes.begin(), boxes.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::int64_t> counts;
        counts.reserve(sorted.size());
        for (const auto& kv : sorted) counts.push_back(kv.second);
        est.z_mean[k] += detail::box_moment(counts, maps[c].absorbed, n) / static_cast<double>(clusters.size());
      }
    }
    est.tau = fit_power_law(sizes, est.z_mean, FitWindow{sizes.front(), sizes.back()});
    if (n != 1.0) {
      est.D = est.tau.exponent / (n - 1.0);
      est.D_error = est.tau.std_error / std::abs(n - 1.0);
    }
    out.push_back(std::move(est));
  }
  return out;
}

}  // namespace kpz::mc
