#include <cmath>
#include <set>
#include <utility>

#include "catch_amalgamated.hpp"
#include "kpz/catalog.hpp"
#include "kpz/mc/random_walk.hpp"

using namespace kpz::mc;

namespace {

/// Probability that L walkers started at (i, 0) all survive their first step,
/// by enumerating all 4^L step choices with the same rule as the simulation:
/// walkers move in index order and die on a site another walker has visited.
double survive_one_step(int L) {
  int total = 0, alive = 0;
  int combos = 1;
  for (int i = 0; i < L; ++i) combos *= 4;
  for (int code = 0; code < combos; ++code) {
    std::set<std::pair<int, int>> owned[8];
    std::set<std::pair<int, int>> all;
    for (int i = 0; i < L; ++i) owned[i].insert({i, 0});
    bool ok = true;
    int c = code;
    for (int i = 0; i < L && ok; ++i) {
      const auto d = kSquareSteps[c % 4];
      c /= 4;
      const std::pair<int, int> site{i + d.x, d.y};
      for (int j = 0; j < L; ++j)
        if (j != i && owned[j].count(site)) ok = false;
      owned[i].insert(site);
    }
    ++total;
    alive += ok ? 1 : 0;
  }
  return static_cast<double>(alive) / total;
}

}  // namespace

TEST_CASE("brute-force oracle at t = 1") {
  CHECK(survive_one_step(2) == 9.0 / 16.0);
  for (int L : {2, 3}) {
    const auto res = rw_nonintersection(L, 16, 20000, 31, 1);
    REQUIRE(res.checkpoints.front() == 1);
    const double p = survive_one_step(L);
    const double phat = static_cast<double>(res.survivors.front()) / res.trials;
    const double sigma = std::sqrt(p * (1 - p) / res.trials);
    INFO("L = " << L << ", oracle " << p << ", estimate " << phat);
    CHECK(std::abs(phat - p) < 3 * sigma);
  }
}

TEST_CASE("survival counts are monotone and checkpoints log-spaced") {
  const auto cps = log_checkpoints(4096);
  CHECK(cps.front() == 1);
  CHECK(cps.back() == 4096);
  for (std::size_t i = 1; i < cps.size(); ++i) CHECK(cps[i] > cps[i - 1]);
  const auto res = rw_nonintersection(2, 512, 4000, 1, 1);
  for (std::size_t i = 1; i < res.survivors.size(); ++i) CHECK(res.survivors[i] <= res.survivors[i - 1]);
  CHECK(res.fit.seed == 1);
}

TEST_CASE("two-walker exponent at small scale") {
  const auto res = rw_nonintersection(2, 1024, 8000, 12345, 1);
  CHECK(std::abs(res.fit.exponent - kpz::zeta_brownian(2)) < 0.08);
}

TEST_CASE("determinism across thread counts") {
  const auto a = rw_nonintersection(3, 256, 3000, 77, 1);
  const auto b = rw_nonintersection(3, 256, 3000, 77, 4);
  CHECK(a.survivors == b.survivors);
  CHECK(a.fit.exponent == b.fit.exponent);
  CHECK(a.fit.std_error == b.fit.std_error);
}

TEST_CASE("random walk errors") {
  CHECK_THROWS_AS(rw_nonintersection(1, 100, 10, 0), kpz::DomainError);
  CHECK_THROWS_AS(rw_nonintersection(2, 1, 10, 0), kpz::DomainError);
  CHECK_THROWS_WITH(rw_nonintersection(8, 64, 3, 0), Catch::Matchers::ContainsSubstring("insufficient statistics"));
}
