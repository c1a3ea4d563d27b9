#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>
#include <vector>

#include "catch_amalgamated.hpp"
#include "kpz/mc/percolation.hpp"

using namespace kpz::mc;

namespace {

auto membership(const std::vector<Site>& sites) {
  auto set = std::make_shared<std::unordered_set<std::uint64_t>>();
  for (Site s : sites) set->insert(site_key(s));
  return [set](Site s) { return set->count(site_key(s)) > 0; };
}

/// Connected component (triangular adjacency) of `start` within `sites`.
std::vector<Site> component(const std::vector<Site>& sites, Site start) {
  const auto inside = membership(sites);
  std::vector<Site> out{start};
  std::set<std::uint64_t> seen{site_key(start)};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (Site d : kTriSteps) {
      const Site n = out[i] + d;
      if (inside(n) && seen.insert(site_key(n)).second) out.push_back(n);
    }
  return out;
}

/// Boundary (occupied, empty) neighbor pairs; equals the hull length when the
/// component has no enclosed holes.
std::size_t boundary_pairs(const std::vector<Site>& comp) {
  const auto inside = membership(comp);
  std::size_t n = 0;
  for (Site s : comp)
    for (Site d : kTriSteps) n += inside(s + d) ? 0 : 1;
  return n;
}

}  // namespace

TEST_CASE("hull of every 2x2 configuration") {
  const std::vector<Site> patch{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  int checked = 0;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<Site> sites;
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1) sites.push_back(patch[static_cast<std::size_t>(i)]);
    INFO("mask " << mask);
    if (sites.empty()) {
      CHECK_THROWS_WITH(extract_hull(sites), Catch::Matchers::ContainsSubstring("no cluster"));
      ++checked;
      continue;
    }
    const auto hull = extract_hull(sites);
    // The walk starts at the rightmost site, so it traces that site's component.
    const Site right = *std::max_element(sites.begin(), sites.end(), [](Site a, Site b) {
      return euclid_x(a) != euclid_x(b) ? euclid_x(a) < euclid_x(b) : a.r < b.r;
    });
    const auto comp = component(sites, hull.front().inside);
    CHECK(std::find(comp.begin(), comp.end(), right) != comp.end());
    CHECK(hull.size() == boundary_pairs(comp));
    CHECK(check_hull(hull, membership(comp)).ok());
    ++checked;
  }
  CHECK(checked == 16);
  CHECK(extract_hull({{0, 0}}).size() == 6);
}

TEST_CASE("hull fuzz on grown clusters") {
  for (std::uint64_t trial = 0; trial < 60; ++trial) {
    const auto cl = perc_cluster(24, 555, trial);
    if (cl.truncated) {
      CHECK(cl.hull.empty());
      continue;
    }
    const auto inside = membership(cl.sites);
    const auto hc = check_hull(cl.hull, inside);
    INFO("trial " << trial);
    CHECK(hc.closed);
    CHECK(hc.edges_unique);
    CHECK(hc.separating);
    CHECK(cl.hull.size() <= boundary_pairs(cl.sites));
    CHECK(cl.hull.size() >= 6);
    CHECK(cl.extent < 24);
  }
}

TEST_CASE("hull around a ring skips the hole") {
  // Six neighbours of the origin, origin empty: the outer hull does not see the hole.
  std::vector<Site> ring(kTriSteps.begin(), kTriSteps.end());
  const auto hull = extract_hull(ring);
  CHECK(check_hull(hull, membership(ring)).ok());
  CHECK(hull.size() == boundary_pairs(ring) - 6);
}

TEST_CASE("clusters are reproducible and the ensemble is thread-independent") {
  const auto a = perc_cluster(64, 9, 3), b = perc_cluster(64, 9, 3);
  CHECK(a.sites == b.sites);
  const auto e1 = perc_ensemble(32, 20, 11, 1);
  const auto e4 = perc_ensemble(32, 20, 11, 4);
  REQUIRE(e1.clusters.size() == 20);
  CHECK(e1.attempts == e4.attempts);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(e1.clusters[i].trial == e4.clusters[i].trial);
    CHECK(e1.clusters[i].hull_length == e4.clusters[i].hull_length);
    CHECK(e1.clusters[i].radius_gyration == e4.clusters[i].radius_gyration);
    CHECK(4 * e1.clusters[i].extent >= 32);
  }
  CHECK(e1.attempts == 20 + e1.resampled_small + e1.resampled_truncated);
}

TEST_CASE("hull dimension at small scale") {
  const auto ens = perc_ensemble(96, 120, 2718, 1);
  const auto f = hull_dimension(ens.clusters, 2718);
  CHECK(std::abs(f.exponent - 1.75) < 0.12);
  CHECK(f.seed == 2718);
  CHECK_THROWS_AS(hull_dimension({}), kpz::StatisticsError);
}

TEST_CASE("experimental external perimeter estimate runs") {
  const auto ens = perc_ensemble(128, 1, 31, 1);
  const auto cl = perc_cluster(128, 31, ens.clusters.front().trial);
  const auto ep = external_perimeter_experimental(cl);
  CHECK(ep.meshes.size() >= 5);
  CHECK(ep.fit.exponent > 1.0);
  CHECK(ep.fit.exponent < 1.75);
  CHECK_THROWS_AS(external_perimeter_experimental(PercCluster{}), kpz::DomainError);
}
