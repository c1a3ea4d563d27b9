#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "kpz/mc/fit.hpp"
#include "kpz/mc/rng.hpp"

using namespace kpz::mc;
using Catch::Matchers::WithinAbs;

namespace {
std::vector<double> geometric(double lo, double ratio, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(ratio, i));
  return v;
}
}  // namespace

TEST_CASE("exact power laws") {
  const auto xs = geometric(1.0, 1.5, 20);
  std::vector<double> ys, flat(xs.size(), 4.0);
  for (double x : xs) ys.push_back(3.0 * x * x);
  const auto f = fit_power_law(xs, ys);
  CHECK_THAT(f.exponent, WithinAbs(2.0, 1e-12));
  CHECK_THAT(std::exp(f.intercept), WithinAbs(3.0, 1e-10));
  CHECK(f.std_error > 0.0);
  CHECK(f.std_error < 1e-12);
  CHECK(f.samples == 12);  // 20 points minus 4 at each end
  CHECK(f.window.lo == xs[4]);
  CHECK(f.window.hi == xs[15]);
  CHECK_THAT(fit_power_law(xs, flat).exponent, WithinAbs(0.0, 1e-12));
}

TEST_CASE("noisy power law recovers the exponent") {
  const auto xs = geometric(2.0, 1.25, 40);
  PhiloxStream rng(5, 0);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::pow(x, 1.75) * (1.0 + 0.01 * rng.normal()));
  const auto f = fit_power_law(xs, ys, FitWindow{xs.front(), xs.back()});
  CHECK(f.samples == 40);
  CHECK(std::abs(f.exponent - 1.75) < 4 * f.std_error);
  CHECK(f.std_error < 0.01);
  CHECK(std::abs(z_score(f, 1.75)) < 4);
}

TEST_CASE("fit errors") {
  const auto xs = geometric(1.0, 2.0, 10);
  std::vector<double> ys(xs.size(), 1.0);
  ys[5] = 0.0;
  CHECK_THROWS_AS(fit_power_law(xs, ys), kpz::DomainError);
  CHECK_THROWS_AS(fit_power_law(xs, std::vector<double>(3, 1.0)), kpz::DomainError);
  CHECK_THROWS_AS(fit_power_law({1, 2, 3, 4}, {1, 2, 3, 4}), kpz::StatisticsError);
  CHECK_THROWS_AS(linear_fit({1, 1, 1}, {1, 2, 3}), kpz::StatisticsError);
}
