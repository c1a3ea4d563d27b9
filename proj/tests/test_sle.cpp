#include <cmath>
#include <complex>
#include <vector>

#include "catch_amalgamated.hpp"
#include "kpz/mc/sle.hpp"

using namespace kpz::mc;
using Catch::Matchers::WithinAbs;

TEST_CASE("kappa = 0 gives the vertical ray") {
  const double dt = 1e-3;
  const auto tr = sle_trace(0.0, 200, dt, 1);
  REQUIRE(tr.points.size() == 201);
  for (std::size_t k = 0; k < tr.points.size(); ++k) {
    CHECK_THAT(tr.points[k].real(), WithinAbs(0.0, 1e-12));
    CHECK_THAT(tr.points[k].imag(), WithinAbs(2.0 * std::sqrt(k * dt), 1e-10));
  }
}

TEST_CASE("forward flow returns each point to its driving value") {
  const auto tr = sle_trace(2.0, 300, 1e-3, 7);
  for (std::size_t k = 1; k < tr.points.size(); k += 13) {
    const cplx w = forward_flow(tr, k);
    CHECK_THAT(w.real(), WithinAbs(tr.driving[k - 1], 1e-6));
    CHECK_THAT(w.imag(), WithinAbs(0.0, 1e-6));
  }
  CHECK_THROWS_AS(forward_flow(tr, 0), kpz::DomainError);
}

TEST_CASE("mirrored driving gives the mirrored trace") {
  const auto tr = sle_trace(6.0, 400, 1e-3, 3);
  std::vector<double> neg;
  for (double x : tr.driving) neg.push_back(-x);
  const auto mir = sle_trace_from_driving(6.0, neg, 1e-3);
  for (std::size_t k = 0; k < tr.points.size(); ++k) {
    CHECK_THAT(mir.points[k].real(), WithinAbs(-tr.points[k].real(), 1e-9));
    CHECK_THAT(mir.points[k].imag(), WithinAbs(tr.points[k].imag(), 1e-9));
  }
}

TEST_CASE("endpoint distribution is left-right symmetric") {
  const auto ens = sle_ensemble(4.0, 300, 200, 1e-3, 99, 1);
  double s = 0, s2 = 0;
  for (const auto& tr : ens.traces) {
    const double x = tr.points.back().real();
    s += x, s2 += x * x;
  }
  const double n = ens.traces.size(), mean = s / n, sd = std::sqrt(s2 / n - mean * mean);
  CHECK(std::abs(mean) < 4.0 * sd / std::sqrt(n));
}

TEST_CASE("self-crossings: rare below kappa = 4, common above") {
  // Polygonal traces can cross where a simple curve nearly touches itself, so compare rates.
  int low = 0, high = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto tr = sle_trace(8.0 / 3.0, 300, 1e-3, 5, t);
    for (std::size_t k = 1; k < tr.points.size(); ++k) CHECK(tr.points[k].imag() > 0.0);
    low += has_self_crossing(tr);
    high += has_self_crossing(sle_trace(6.0, 300, 1e-3, 5, t));
  }
  CHECK(high >= low + 6);
  SleTrace bow;
  bow.points = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK(has_self_crossing(bow));
}

TEST_CASE("radial kappa = 0 is the Koebe slit") {
  const double capacity = 3.0;
  const auto tr = sle_radial_trace(0.0, 300, capacity, 1);
  for (std::size_t k = 1; k < tr.points.size(); k += 17) {
    const double e = std::exp(k * tr.dt);
    const double r = (2 * e - 1) - std::sqrt((2 * e - 1) * (2 * e - 1) - 1);  // (1+r)^2 / (4r) = e^t
    CHECK_THAT(tr.points[k].real(), WithinAbs(r, 1e-9));
    CHECK_THAT(tr.points[k].imag(), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("radial forward flow and containment") {
  const auto tr = sle_radial_trace(3.0, 300, 4.0, 2);
  for (std::size_t k = 1; k < tr.points.size(); k += 23) {
    CHECK(std::abs(radial_forward_flow(tr, k) - std::polar(1.0, tr.driving[k - 1])) < 1e-5);
    CHECK(std::abs(tr.points[k]) < 1.0);
  }
}

TEST_CASE("ensembles are independent of the thread count") {
  const auto a = sle_ensemble(6.0, 8, 100, 1e-3, 4, 1), b = sle_ensemble(6.0, 8, 100, 1e-3, 4, 3);
  for (std::size_t i = 0; i < 8; ++i) CHECK(a.traces[i].points == b.traces[i].points);
  const auto ra = sle_radial_ensemble(2.0, 5, 80, 4.0, 4, 1), rb = sle_radial_ensemble(2.0, 5, 80, 4.0, 4, 2);
  for (std::size_t i = 0; i < 5; ++i) CHECK(ra[i].points == rb[i].points);
}

TEST_CASE("estimators at small scale") {
  const auto radial = sle_radial_ensemble(2.0, 150, 500, 8.0, 21, 1);
  const auto w = sle_winding_variance(radial);
  CHECK(std::abs(w.fit.exponent - 2.0) < 0.5);
  const auto ens = sle_ensemble(2.0, 40, 1000, 1e-4, 21, 1);
  const auto d = sle_dimension(ens.traces);
  CHECK(std::abs(d.fit.exponent - 1.25) < 0.15);
}

TEST_CASE("estimator errors") {
  const auto chordal = sle_ensemble(2.0, 3, 50, 1e-3, 1, 1);
  CHECK_THROWS_AS(sle_winding_variance(chordal.traces), kpz::DomainError);
  const auto shallow = sle_radial_ensemble(2.0, 4, 50, 1.0, 1, 1);
  CHECK_THROWS_WITH(sle_winding_variance(shallow), Catch::Matchers::ContainsSubstring("insufficient range"));
  CHECK_THROWS_WITH(sle_dimension(chordal.traces), Catch::Matchers::ContainsSubstring("insufficient range"));
  CHECK_THROWS_AS(sle_trace(-1.0, 10, 1e-3, 1), kpz::DomainError);
}
