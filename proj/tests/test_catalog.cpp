#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "kpz/catalog.hpp"
#include "kpz/identities.hpp"

using namespace kpz;
using Catch::Matchers::WithinAbs;

TEST_CASE("Brownian intersection exponents") {
  CHECK_THAT(zeta_packets({1, 1}).zeta, WithinAbs(5.0 / 8.0, 1e-15));
  CHECK_THAT(zeta_packets({1, 1, 1}).zeta, WithinAbs(35.0 / 24.0, 1e-15));
  CHECK_THAT(zeta_packets({2, 1}).zeta, WithinAbs(1.0, 1e-15));
  CHECK_THAT(zeta_packets({2, 1}).zeta, WithinAbs(zeta_brownian(2.5), 1e-15));
  CHECK_THAT(2.0 - 2.0 * zeta_brownian(1.5), WithinAbs(4.0 / 3.0, 1e-15));
  CHECK(disconnection_brownian() == 0.125);
  CHECK_THAT(zeta_packets({1}).zeta, WithinAbs(disconnection_brownian(), 1e-15));
  // Half-plane: 2 zeta~ = x(1+2x)/3 with x = L for L single paths.
  CHECK_THAT(zeta_packets({1, 1}).two_zeta_tilde, WithinAbs(10.0 / 3.0, 1e-15));
  CHECK_THROWS_AS(zeta_packets(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(zeta_packets({1, -1}), DomainError);
}

TEST_CASE("watermelon exponents") {
  CHECK_THAT(saw_watermelon(1).x, WithinAbs(5.0 / 48.0, 1e-15));
  CHECK_THAT(saw_watermelon(1).x_tilde, WithinAbs(5.0 / 8.0, 1e-15));
  CHECK_THAT(saw_watermelon(2).x, WithinAbs(2.0 / 3.0, 1e-15));
  CHECK_THAT(saw_watermelon(3).x_tilde, WithinAbs(33.0 / 8.0, 1e-15));
  CHECK(perc_crossing(2).x_tilde == 1.0);
  CHECK(perc_crossing(3).x_tilde == 2.0);
  CHECK_THAT(perc_crossing(3).x, WithinAbs(2.0 / 3.0, 1e-15));
  CHECK_THAT(2.0 - perc_crossing(2).x, WithinAbs(7.0 / 4.0, 1e-15));
  CHECK_THROWS_AS(saw_watermelon(0), DomainError);
  CHECK_THROWS_AS(perc_crossing(0), DomainError);
}

TEST_CASE("harmonic moments of percolation clusters") {
  CHECK_THAT(perc_harmonic(2).D, WithinAbs(11.0 / 12.0, 1e-15));
  CHECK_THAT(perc_harmonic(0).D, WithinAbs(4.0 / 3.0, 1e-15));
  CHECK_THAT(perc_harmonic(1).tau, WithinAbs(0.0, 1e-15));
  CHECK_THROWS_AS(perc_harmonic(-0.05), DomainError);
  for (double n = 0.0; n < 20.0; n += 0.7)
    if (std::abs(n - 1.0) > 1e-3) CHECK_THAT(perc_harmonic(n).D, WithinAbs(perc_harmonic(n).tau / (n - 1.0), 1e-12));
}

TEST_CASE("Hausdorff dimensions of Potts clusters") {
  const auto h6 = hausdorff_triple(params_from_kappa(6.0));
  CHECK_THAT(h6.d_hull, WithinAbs(1.75, 1e-15));
  CHECK_THAT(h6.d_ep, WithinAbs(4.0 / 3.0, 1e-15));
  CHECK_THAT(h6.d_sc, WithinAbs(0.75, 1e-15));
  CHECK(h6.pinching_points);
  const auto h163 = hausdorff_triple(params_from_kappa(16.0 / 3.0));
  CHECK_THAT(h163.d_hull, WithinAbs(5.0 / 3.0, 1e-15));
  CHECK_THAT(h163.d_ep, WithinAbs(11.0 / 8.0, 1e-15));
  CHECK_THAT(h163.d_sc, WithinAbs(13.0 / 24.0, 1e-15));
  const auto h4 = hausdorff_triple(params_from_kappa(4.0));
  CHECK(h4.d_hull == 1.5);
  CHECK(h4.d_ep == 1.5);
  CHECK(h4.d_sc == 0.0);
  CHECK_FALSE(h4.pinching_points);
  CHECK(hausdorff_triple(params_from_kappa(9.0)).geometric_warning);
  for (const auto& row : potts_table_exact()) {
    const auto got = potts_row(row.Q);
    CHECK_THAT(got.d_ep, WithinAbs(row.d_ep, 1e-12));
    CHECK_THAT(got.d_h, WithinAbs(row.d_h, 1e-12));
    CHECK_THAT(got.d_sc, WithinAbs(row.d_sc, 1e-12));
  }
}

TEST_CASE("duality of hull and external perimeter") {
  for (int i = 0; i < 100; ++i) {
    const double k = 4.0 + 4.0 * i / 99.0;
    const auto h = hausdorff_triple(params_from_kappa(k));
    CHECK_THAT((h.d_ep - 1.0) * (h.d_hull - 1.0), WithinAbs(0.25, 1e-12));
    CHECK_THAT(h.d_ep, WithinAbs(hausdorff_triple(params_from_kappa(16.0 / k)).d_hull, 1e-12));
  }
}

TEST_CASE("hiding exponent: nested maps equal the closed form") {
  CHECK_THAT(hiding_exponent(0, 1), WithinAbs(1.0, 1e-14));
  CHECK_THAT(hiding_exponent(0, 2), WithinAbs(2.0, 1e-14));
  CHECK_THAT(hiding_exponent(1, 1), WithinAbs(1.5 + std::sqrt(7.0) / 2.0, 1e-14));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> m(0.0, 5.0), n(0.625, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double a = m(rng), b = n(rng);
    CHECK_THAT(hiding_exponent(a, b), WithinAbs(hiding_exponent_closed(a, b), 1e-11));
  }
  CHECK_THROWS_AS(hiding_exponent(1, 0.5), DomainError);
  CHECK_THROWS_AS(hiding_exponent(-1, 1), DomainError);
}

TEST_CASE("multiple SLE and dressed stars") {
  const auto p6 = params_from_kappa(6.0);
  CHECK_THAT(multiple_sle(1, p6).x_tilde, WithinAbs(0.0, 1e-15));
  CHECK_THAT(multiple_sle(1, p6).x, WithinAbs(0.0, 1e-15));
  const auto p83 = params_from_kappa(8.0 / 3.0);
  CHECK_THAT(multiple_sle(1, p83).x_tilde, WithinAbs(5.0 / 8.0, 1e-14));
  CHECK_THAT(multiple_sle(1, p83).x, WithinAbs(5.0 / 48.0, 1e-14));
  CHECK_THAT(multiple_sle(2, params_from_kappa(4.0)).x_tilde, WithinAbs(1.0, 1e-15));

  for (double k : {1.0, 2.0, 4.0}) {
    const auto d = multiple_sle_dressed(2, 0, params_from_kappa(k));
    CHECK_THAT(d.lambda_tilde, WithinAbs(0.0, 1e-15));
    CHECK_THAT(d.lambda, WithinAbs(0.0, 1e-15));
  }
  const auto d6 = multiple_sle_dressed(1, 0, p6);
  CHECK_THAT(d6.lambda_tilde, WithinAbs(1.0 / 3.0, 1e-15));
  CHECK_THAT(d6.lambda, WithinAbs(0.25, 1e-15));
  // gamma' route: L (1 - 4/kappa) and (1/2)(L + kappa/4 - 1)(1 - 4/kappa).
  for (double L : {1.0, 2.0, 3.0}) {
    const auto d = multiple_sle_dressed(L, 0, params_from_kappa(7.0));
    CHECK_THAT(d.lambda_tilde, WithinAbs(L * (1 - 4.0 / 7), 1e-14));
    CHECK_THAT(d.lambda, WithinAbs(0.5 * (L + 7.0 / 4 - 1) * (1 - 4.0 / 7), 1e-14));
  }
}

TEST_CASE("contact exponents and SLE(kappa, rho)") {
  for (double k : {2.0, 8.0 / 3.0, 4.0, 6.0}) {
    const auto p = params_from_kappa(k);
    const auto c = contact_exponents(p, (6.0 - k) / (2.0 * k), 1.0);
    CHECK_THAT(c.sde_with_sle, WithinAbs(2.0 / k, 1e-14));
  }
  const auto c4 = contact_exponents(params_from_kappa(4.0), 1.0, 1.0);
  CHECK_THAT(c4.bulk_sde_with_sle, WithinAbs(c4.sde_with_sle, 1e-15));
  CHECK(rho_min(params_from_kappa(6.0)) == 2.0);
  CHECK(rho_min(params_from_kappa(3.0)) == 0.0);
  CHECK(rho_min(params_from_kappa(4.0)) == 0.0);
  CHECK_THROWS_WITH(sigma_contact(params_from_kappa(6.0), 1.0, 1.0),
                    Catch::Matchers::ContainsSubstring("cannot avoid the boundary ray"));
  const auto r = sle_rho(params_from_kappa(6.0), 1.0);
  CHECK_THAT(r.L_equiv, WithinAbs(r.rho / 2.0, 1e-15));
  CHECK_THAT(sigma_contact(params_from_kappa(3.0), 0.0, 1.0), WithinAbs(0.0, 1e-15));
}

TEST_CASE("winding variance of k strands") {
  const auto p = params_from_kappa(6.0);
  CHECK_THAT(winding_variance(p, 1, 0, 2.0), WithinAbs(12.0, 1e-14));
  CHECK_THAT(winding_variance(p, 2, 0, 2.0), WithinAbs(3.0, 1e-14));
  CHECK_THAT(winding_variance(p, 2, 1, 1.0), WithinAbs(6.0 / 9.0, 1e-14));
  CHECK_THAT(winding_effective_strands(params_from_kappa(3.0), 2, 1), WithinAbs(2.0, 1e-15));
  CHECK_THROWS_AS(winding_variance(p, 2, 2, 1.0), DomainError);
  CHECK_THROWS_AS(winding_variance(p, 1, 0, 0.0), DomainError);
}

TEST_CASE("exact identity list holds to 1e-12") {
  for (const auto& c : exact_identities()) {
    INFO(c.name);
    CHECK(c.ok(1e-12));
  }
}
