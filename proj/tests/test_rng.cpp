#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "catch_amalgamated.hpp"
#include "kpz/mc/parallel.hpp"
#include "kpz/mc/rng.hpp"

using namespace kpz::mc;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  static_assert(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  PhiloxStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint32_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  CHECK(a.blocks_drawn() == 16);
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}

TEST_CASE("uniform and bounded draws") {
  PhiloxStream rng(2024, 0);
  double sum = 0.0;
  const int n = 200000;
  std::array<int, 6> bins{};
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    ++bins[rng.below(6)];
  }
  CHECK(std::abs(sum / n - 0.5) < 5 * std::sqrt(1.0 / 12.0 / n));
  double chi2 = 0.0;
  for (int b : bins) chi2 += (b - n / 6.0) * (b - n / 6.0) / (n / 6.0);
  CHECK(chi2 < 25.0);  // 5 dof, p ~ 1e-4
  for (int i = 0; i < 1000; ++i) CHECK(rng.uniform_pos() > 0.0);
}

TEST_CASE("normal variates") {
  PhiloxStream rng(99, 1);
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z, s2 += z * z, s4 += z * z * z * z;
  }
  CHECK(std::abs(s1 / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(s4 / n - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("parallel trials cover every index once and rethrow") {
  for (unsigned t : {1u, 2u, 3u, 8u}) {
    std::vector<int> seen(1000, 0);
    parallel_trials(seen.size(), t, [&](std::size_t i, unsigned) { ++seen[i]; });
    CHECK(std::set<int>(seen.begin(), seen.end()) == std::set<int>{1});
  }
  CHECK_THROWS_AS(parallel_trials(10, 2, [](std::size_t i, unsigned) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
