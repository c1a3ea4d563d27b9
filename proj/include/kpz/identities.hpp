#pragma once

// Exact values the catalog must reproduce, as (name, computed, expected)
// triples. Shared by the acceptance suite and `kpzlab --exact-check`.

#include <cmath>
#include <string>
#include <vector>

#include "kpz/catalog.hpp"
#include "kpz/multifractal.hpp"
#include "kpz/params.hpp"

namespace kpz {

struct IdentityCheck {
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double error() const { return std::abs(computed - expected); }
  bool ok(double tol) const { return error() <= tol; }
};

struct PottsRow {
  int Q = 0;
  double d_ep = 0.0, d_h = 0.0, d_sc = 0.0;
};

/// Critical Potts dimensions of external perimeter, hull and singly connecting bonds.
inline std::vector<PottsRow> potts_table_exact() {
  return {{0, 5.0 / 4, 2.0, 5.0 / 4},
          {1, 4.0 / 3, 7.0 / 4, 3.0 / 4},
          {2, 11.0 / 8, 5.0 / 3, 13.0 / 24},
          {3, 17.0 / 12, 8.0 / 5, 7.0 / 20},
          {4, 3.0 / 2, 3.0 / 2, 0.0}};
}

/// Potts row computed from Q via g, kappa = 4/g and the Hausdorff triple.
inline PottsRow potts_row(int Q) {
  const SystemParams p = params_from_kappa(4.0 / potts_coupling(Q));
  const HausdorffTriple h = hausdorff_triple(p);
  return {Q, h.d_ep, h.d_hull, h.d_sc};
}

inline std::vector<IdentityCheck> exact_identities() {
  std::vector<IdentityCheck> out;
  const double zeta_expected[] = {1.0 / 8, 5.0 / 8, 35.0 / 24, 21.0 / 8};
  for (int L = 1; L <= 4; ++L) {
    const std::vector<double> packets(static_cast<std::size_t>(L), 1.0);
    out.push_back({"zeta_" + std::to_string(L), zeta_packets(packets).zeta, zeta_expected[L - 1]});
  }
  out.push_back({"zeta(2,1)", zeta_packets({2.0, 1.0}).zeta, 1.0});
  out.push_back({"frontier 2-2 zeta_3/2", 2.0 - 2.0 * zeta_brownian(1.5), 4.0 / 3});
  out.push_back({"disconnection", disconnection_brownian(), 1.0 / 8});
  out.push_back({"perc x~_2", perc_crossing(2).x_tilde, 1.0});
  out.push_back({"perc x~_3", perc_crossing(3).x_tilde, 2.0});
  out.push_back({"perc x_3", perc_crossing(3).x, 2.0 / 3});
  for (const PottsRow& row : potts_table_exact()) {
    const PottsRow got = potts_row(row.Q);
    const std::string q = "Q=" + std::to_string(row.Q);
    out.push_back({q + " D_EP", got.d_ep, row.d_ep});
    out.push_back({q + " D_H", got.d_h, row.d_h});
    out.push_back({q + " D_SC", got.d_sc, row.d_sc});
  }
  const SystemParams c0 = params_from_c(0.0, Phase::Dilute);
  out.push_back({"saw x~_1", saw_watermelon(1).x_tilde, 5.0 / 8});
  out.push_back({"saw x~_3", saw_watermelon(3).x_tilde, 33.0 / 8});
  out.push_back({"D(0), c=0", D(0.0, c0), 4.0 / 3});
  out.push_back({"D(2), c=0", D(2.0, c0), 11.0 / 12});
  out.push_back({"f(3), c=0", f_of_alpha(3.0, c0), 4.0 / 3});
  out.push_back({"hiding (1,1)", hiding_exponent(1.0, 1.0), 1.5 + std::sqrt(7.0) / 2});
  return out;
}

}  // namespace kpz
