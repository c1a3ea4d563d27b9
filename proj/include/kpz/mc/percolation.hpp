#pragma once

// Critical site percolation on the triangular lattice (p_c = 1/2).
// Sites use axial coordinates (q, r); the Euclidean position is
// (q + r/2, r sqrt(3)/2). Hull edges live on the dual hexagonal lattice and
// are stored as (occupied site, direction to the empty neighbour).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "kpz/errors.hpp"
#include "kpz/mc/fit.hpp"
#include "kpz/mc/parallel.hpp"
#include "kpz/mc/rng.hpp"

namespace kpz::mc {

struct Site {
  std::int32_t q = 0;
  std::int32_t r = 0;
  friend bool operator==(const Site&, const Site&) = default;
  friend Site operator+(Site a, Site b) { return {a.q + b.q, a.r + b.r}; }
  friend Site operator-(Site a, Site b) { return {a.q - b.q, a.r - b.r}; }
};

/// Counterclockwise, 60 degrees apart; steps d and d+1 are themselves neighbours.
inline constexpr std::array<Site, 6> kTriSteps{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

inline constexpr double kSqrt3Half = 0.86602540378443864676;

inline int hex_distance(Site a, Site b) {
  const int dq = a.q - b.q, dr = a.r - b.r;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

inline double euclid_x(Site s) { return s.q + 0.5 * s.r; }
inline double euclid_y(Site s) { return kSqrt3Half * s.r; }

inline std::uint64_t site_key(Site s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.q)) << 32) | static_cast<std::uint32_t>(s.r);
}

struct HullEdge {
  Site inside;
  int dir = 0;  // inside + kTriSteps[dir] is outside the cluster
  Site outside() const { return inside + kTriSteps[static_cast<std::size_t>(dir)]; }
  friend bool operator==(const HullEdge&, const HullEdge&) = default;
};

struct PercCluster {
  Site seed;
  std::vector<Site> sites;
  std::vector<HullEdge> hull;
  double radius_gyration = 0.0;
  double max_radius = 0.0;  // Euclidean, from the seed
  int extent = 0;           // hex distance, from the seed
  bool truncated = false;   // reached the growth radius
};

// ---------------------------------------------------------------------------
// Hull walker
// ---------------------------------------------------------------------------

/// Left-hand wall follower. From the edge (a, d), look at c = a + e_{d+1},
/// the third corner of the triangle on edge (a, b): if c is inside, the walk
/// pivots onto c keeping b outside; otherwise it turns around a. Returns the
/// closed edge loop separating the cluster from the empty region containing
/// the starting outside site.
inline std::vector<HullEdge> walk_hull(const std::function<bool(Site)>& inside, HullEdge start,
                                       std::size_t max_edges = 0) {
  if (!inside(start.inside) || inside(start.outside()))
    throw DomainError("walk_hull: start edge must separate an inside site from an outside site");
  std::vector<HullEdge> out;
  HullEdge e = start;
  do {
    out.push_back(e);
    if (max_edges && out.size() > max_edges) throw StatisticsError("walk_hull: edge budget exceeded");
    const int next = (e.dir + 1) % 6;
    const Site c = e.inside + kTriSteps[static_cast<std::size_t>(next)];
    if (inside(c)) {
      e = {c, (e.dir + 5) % 6};
    } else {
      e.dir = next;
    }
  } while (!(e == start));
  return out;
}

/// Hull of an arbitrary finite site set, starting from its right-most site.
inline std::vector<HullEdge> extract_hull(const std::vector<Site>& sites) {
  if (sites.empty()) throw DomainError("extract_hull: no occupied site, no cluster");
  std::unordered_set<std::uint64_t> set;
  for (Site s : sites) set.insert(site_key(s));
  const Site right = *std::max_element(sites.begin(), sites.end(), [](Site a, Site b) {
    return euclid_x(a) < euclid_x(b) || (euclid_x(a) == euclid_x(b) && a.r < b.r);
  });
  return walk_hull([&](Site s) { return set.count(site_key(s)) > 0; }, {right, 0}, 12 * sites.size() + 12);
}

struct HullCheck {
  bool closed = false;
  bool edges_unique = false;
  bool separating = false;
  bool ok() const { return closed && edges_unique && separating; }
};

/// Structural invariants: consecutive edges share a hex vertex and the loop
/// closes, no edge repeats (which on the degree-3 hexagonal lattice also rules
/// out crossings), and each edge has an inside and an outside site.
inline HullCheck check_hull(const std::vector<HullEdge>& hull, const std::function<bool(Site)>& inside) {
  HullCheck hc;
  if (hull.empty()) return hc;
  auto follows = [&](const HullEdge& a, const HullEdge& b) {
    const Site c = a.inside + kTriSteps[static_cast<std::size_t>((a.dir + 1) % 6)];
    return b == HullEdge{c, (a.dir + 5) % 6} || b == HullEdge{a.inside, (a.dir + 1) % 6};
  };
  hc.closed = true;
  for (std::size_t i = 0; i < hull.size(); ++i)
    if (!follows(hull[i], hull[(i + 1) % hull.size()])) hc.closed = false;
  std::unordered_set<std::uint64_t> seen;
  hc.edges_unique = true;
  hc.separating = true;
  for (const auto& e : hull) {
    // undirected edge key: the smaller endpoint and direction
    Site a = e.inside, b = e.outside();
    int d = e.dir;
    if (site_key(b) < site_key(a)) {
      std::swap(a, b);
      d = (d + 3) % 6;
    }
    if (!seen.insert(site_key(a) * 6 + static_cast<std::uint64_t>(d)).second) hc.edges_unique = false;
    if (!inside(e.inside) || inside(e.outside())) hc.separating = false;
  }
  return hc;
}

// ---------------------------------------------------------------------------
// Leath growth
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint8_t kUnknown = 0, kOccupied = 1, kEmpty = 2;

/// Square axial grid centred on the seed; keeps touched cells for cheap reset.
class PercGrid {
 public:
  explicit PercGrid(int half) : half_(half), width_(2 * half + 1), cells_(static_cast<std::size_t>(width_) * width_, kUnknown) {}

  bool in_grid(Site s) const { return std::abs(s.q) <= half_ && std::abs(s.r) <= half_; }
  std::uint8_t get(Site s) const { return in_grid(s) ? cells_[index(s)] : kUnknown; }
  void set(Site s, std::uint8_t v) {
    const std::size_t i = index(s);
    if (cells_[i] == kUnknown) touched_.push_back(i);
    cells_[i] = v;
  }
  void reset() {
    for (std::size_t i : touched_) cells_[i] = kUnknown;
    touched_.clear();
  }
  int half() const { return half_; }

 private:
  std::size_t index(Site s) const {
    return static_cast<std::size_t>(s.q + half_) + static_cast<std::size_t>(s.r + half_) * static_cast<std::size_t>(width_);
  }
  int half_, width_;
  std::vector<std::uint8_t> cells_;
  std::vector<std::size_t> touched_;
};

inline PercCluster grow_cluster(int radius, PhiloxStream& rng, PercGrid& grid) {
  grid.reset();
  PercCluster cl;
  const Site seed{0, 0};
  cl.seed = seed;
  grid.set(seed, kOccupied);
  cl.sites.push_back(seed);
  for (std::size_t head = 0; head < cl.sites.size(); ++head) {
    const Site s = cl.sites[head];
    for (Site step : kTriSteps) {
      const Site n = s + step;
      if (grid.get(n) != kUnknown) continue;
      if (hex_distance(n, seed) > radius) {
        cl.truncated = true;
        continue;
      }
      // Each site is decided once, in breadth-first order.
      if (rng() & 1u) {
        grid.set(n, kOccupied);
        cl.sites.push_back(n);
      } else {
        grid.set(n, kEmpty);
      }
    }
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0;
  for (Site s : cl.sites) {
    const double x = euclid_x(s), y = euclid_y(s);
    sx += x;
    sy += y;
    sxx += x * x + y * y;
    cl.extent = std::max(cl.extent, hex_distance(s, seed));
    cl.max_radius = std::max(cl.max_radius, std::hypot(x, y));
  }
  const double n = static_cast<double>(cl.sites.size());
  cl.radius_gyration = std::sqrt(std::max(0.0, sxx / n - (sx * sx + sy * sy) / (n * n)));
  if (!cl.truncated) {
    Site right = seed;
    for (Site s : cl.sites)
      if (euclid_x(s) > euclid_x(right) || (euclid_x(s) == euclid_x(right) && s.r > right.r)) right = s;
    cl.hull = walk_hull([&](Site s) { return grid.get(s) == kOccupied; }, {right, 0});
  }
  return cl;
}

}  // namespace detail

/// One Leath cluster grown from the origin inside hex radius `radius`.
/// Stream `trial` of `seed`; clusters that touch the radius are marked truncated
/// and carry no hull.
inline PercCluster perc_cluster(int radius, std::uint64_t seed, std::uint64_t trial = 0) {
  if (radius < 1) throw DomainError("perc_cluster: radius >= 1");
  detail::PercGrid grid(radius + 2);
  PhiloxStream rng(seed, trial);
  return detail::grow_cluster(radius, rng, grid);
}

struct ClusterSummary {
  std::uint64_t trial = 0;
  std::size_t mass = 0;
  std::size_t hull_length = 0;
  double radius_gyration = 0.0;
  int extent = 0;
};

struct PercEnsemble {
  int radius = 0;
  std::uint64_t seed = 0;
  std::vector<ClusterSummary> clusters;  // accepted, in trial order
  std::uint64_t attempts = 0;
  std::uint64_t resampled_small = 0;      // died before radius/4
  std::uint64_t resampled_truncated = 0;  // reached the radius
};

/// Accepts clusters that die on their own with extent in [radius/4, radius).
/// Attempts run in fixed-size batches and are accepted in trial order, so the
/// ensemble does not depend on the thread count.
inline PercEnsemble perc_ensemble(int radius, std::size_t count, std::uint64_t seed, unsigned threads = 1,
                                  std::uint64_t max_attempts = 0) {
  if (radius < 4) throw DomainError("perc_ensemble: radius >= 4");
  if (max_attempts == 0) max_attempts = 1000 * (count + 1);
  PercEnsemble ens;
  ens.radius = radius;
  ens.seed = seed;
  const unsigned workers = resolve_threads(threads);
  std::vector<detail::PercGrid> grids;
  for (unsigned w = 0; w < workers; ++w) grids.emplace_back(radius + 2);
  constexpr std::size_t kBatch = 256;
  std::vector<std::optional<ClusterSummary>> batch(kBatch);
  std::vector<std::uint8_t> outcome(kBatch);
  while (ens.clusters.size() < count) {
    if (ens.attempts >= max_attempts) throw StatisticsError("perc_ensemble: attempt budget exhausted");
    const std::uint64_t base = ens.attempts;
    parallel_trials(kBatch, workers, [&](std::size_t i, unsigned w) {
      PhiloxStream rng(seed, base + i);
      PercCluster cl = detail::grow_cluster(radius, rng, grids[w]);
      batch[i].reset();
      if (cl.truncated) {
        outcome[i] = 2;
      } else if (4 * cl.extent < radius) {
        outcome[i] = 1;
      } else {
        outcome[i] = 0;
        batch[i] = ClusterSummary{base + i, cl.sites.size(), cl.hull.size(), cl.radius_gyration, cl.extent};
      }
    });
    for (std::size_t i = 0; i < kBatch && ens.clusters.size() < count; ++i) {
      ++ens.attempts;
      if (outcome[i] == 1) ++ens.resampled_small;
      if (outcome[i] == 2) ++ens.resampled_truncated;
      if (batch[i]) ens.clusters.push_back(*batch[i]);
    }
  }
  return ens;
}

/// Hull length ~ R_g^D_H over the ensemble.
inline FitResult hull_dimension(const std::vector<ClusterSummary>& clusters, std::uint64_t seed = 0) {
  if (clusters.size() < 5) throw StatisticsError("hull_dimension: fewer than 5 clusters");
  std::vector<double> xs, ys;
  for (const auto& c : clusters) {
    xs.push_back(c.radius_gyration);
    ys.push_back(static_cast<double>(c.hull_length));
  }
  FitResult f = fit_power_law(xs, ys, FitWindow{*std::min_element(xs.begin(), xs.end()),
                                                 *std::max_element(xs.begin(), xs.end())});
  f.seed = seed;
  return f;
}

// ---------------------------------------------------------------------------
// Accessible perimeter (experimental)
// ---------------------------------------------------------------------------

struct ExternalPerimeterEstimate {
  FitResult fit;  // exponent = D_EP estimate from N(l) ~ l^-D
  std::vector<int> meshes;
  std::vector<double> box_counts;
};

/// Best-effort D_EP: at mesh l the cluster is thickened by l, the exterior
/// is flooded from outside, and the cluster sites within l + 1 of that exterior
/// are box-counted at size l. Narrow fjords close as l grows, mimicking the
/// scaling-limit pinching. No finite-lattice definition is implied.
inline ExternalPerimeterEstimate external_perimeter_experimental(const PercCluster& cl, std::vector<int> meshes = {}) {
  if (cl.sites.empty()) throw DomainError("external_perimeter_experimental: empty cluster");
  if (meshes.empty())
    for (int k = 0;; ++k) {
      const int l = static_cast<int>(std::lround(std::pow(2.0, 0.5 * k)));
      if (4 * l > std::max(8, cl.extent)) break;
      if (meshes.empty() || meshes.back() != l) meshes.push_back(l);
    }
  const int lmax = *std::max_element(meshes.begin(), meshes.end());
  const int half = cl.extent + 2 * lmax + 4;
  const int width = 2 * half + 1;
  auto idx = [&](Site s) {
    return static_cast<std::size_t>(s.q + half) + static_cast<std::size_t>(s.r + half) * static_cast<std::size_t>(width);
  };
  auto in_grid = [&](Site s) { return std::abs(s.q) <= half && std::abs(s.r) <= half; };
  const std::size_t cells = static_cast<std::size_t>(width) * static_cast<std::size_t>(width);

  // Distance from the cluster.
  std::vector<int> dist(cells, -1);
  std::deque<Site> queue;
  for (Site s : cl.sites) {
    dist[idx(s)] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const Site s = queue.front();
    queue.pop_front();
    for (Site step : kTriSteps) {
      const Site n = s + step;
      if (in_grid(n) && dist[idx(n)] < 0) {
        dist[idx(n)] = dist[idx(s)] + 1;
        queue.push_back(n);
      }
    }
  }

  ExternalPerimeterEstimate est;
  est.meshes = meshes;
  for (int l : meshes) {
    // Exterior: flood from the grid corner through sites farther than l.
    std::vector<int> ext(cells, -1);
    const Site corner{-half, -half};
    ext[idx(corner)] = 0;
    queue.assign(1, corner);
    while (!queue.empty()) {
      const Site s = queue.front();
      queue.pop_front();
      for (Site step : kTriSteps) {
        const Site n = s + step;
        if (!in_grid(n) || ext[idx(n)] >= 0) continue;
        if (dist[idx(n)] <= l) continue;
        ext[idx(n)] = 0;
        queue.push_back(n);
      }
    }
    // Grow the exterior back towards the cluster by l + 1 steps.
    for (std::size_t i = 0; i < cells; ++i)
      if (ext[i] == 0) {
        const auto q = static_cast<int>(i % static_cast<std::size_t>(width)) - half;
        const auto r = static_cast<int>(i / static_cast<std::size_t>(width)) - half;
        if (dist[i] == l + 1) queue.push_back({q, r});
      }
    std::unordered_set<std::uint64_t> boxes;
    while (!queue.empty()) {
      const Site s = queue.front();
      queue.pop_front();
      for (Site step : kTriSteps) {
        const Site n = s + step;
        if (!in_grid(n) || ext[idx(n)] >= 0) continue;
        ext[idx(n)] = ext[idx(s)] + 1;
        if (dist[idx(n)] == 0) {
          const auto bx = static_cast<std::int64_t>(std::floor(euclid_x(n) / l));
          const auto by = static_cast<std::int64_t>(std::floor(euclid_y(n) / l));
          boxes.insert((static_cast<std::uint64_t>(bx) << 32) ^ static_cast<std::uint32_t>(by));
        } else if (ext[idx(n)] <= l + 1) {
          queue.push_back(n);
        }
      }
    }
    est.box_counts.push_back(static_cast<double>(boxes.size()));
  }
  std::vector<double> xs(meshes.begin(), meshes.end());
  est.fit = fit_power_law(xs, est.box_counts, FitWindow{xs.front(), xs.back()});
  est.fit.exponent = -est.fit.exponent;
  return est;
}

}  // namespace kpz::mc
