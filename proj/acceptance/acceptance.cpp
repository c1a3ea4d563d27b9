// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//   kpz_acceptance [--only N]... [--threads T]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "campaigns.hpp"
#include "config.hpp"
#include "kpz/catalog.hpp"
#include "kpz/identities.hpp"
#include "kpz/multifractal.hpp"
#include "kpz/star_algebra.hpp"

using namespace kpz;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string repeat(const std::string& atom, int n) {
  std::string s = atom;
  for (int i = 1; i < n; ++i) s += "^" + atom;
  return s;
}

std::string real_text(double v) { return fmt("%.17g", v); }

// ---------------------------------------------------------------------------

Verdict exact_catalog() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = exact_identities();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double worst = 0.0;
  std::size_t held = 0;
  for (const auto& c : checks) {
    worst = std::max(worst, c.error());
    held += c.ok(1e-12);
    if (!c.ok(1e-12)) v.require(false, c.name + fmt(" = %.15g, expected %.15g", c.computed, c.expected));
  }
  v.require(held == checks.size(), fmt("%zu/%zu identities to 1e-12 (max error %.2g)", held, checks.size(), worst));
  v.require(secs < 1.0, fmt("runtime %.4f s < 1 s", secs));
  return v;
}

Verdict algebra_matches_catalog() {
  Verdict v;
  std::size_t combos = 0, bad = 0;
  double worst = 0.0;
  auto cmp = [&](double got, double want, const std::string& what) {
    const double e = std::abs(got - want);
    worst = std::max(worst, e);
    if (e > 1e-12) {
      ++bad;
      v.notes.push_back("FAIL " + what + fmt(": %.15g vs %.15g", got, want));
    }
  };

  // SLE stars, bare and dressed by n Brownian paths.
  for (double k : {1.0, 2.0, 8.0 / 3.0, 3.0, 3.5, 4.0, 5.0, 6.0, 7.0, 8.0}) {
    const auto p = params_from_kappa(k);
    for (int L = 1; L <= 5; ++L) {
      const auto e = eval_boundary(repeat("S", L), p);
      const auto m = multiple_sle(L, p);
      const std::string tag = fmt("kappa=%.4g L=%d", k, L);
      cmp(e.halfplane_dim, m.x_tilde, tag + " x~");
      cmp(e.plane_scaling, m.x, tag + " x");
      cmp(e.qg_bulk, m.qg_bulk, tag + " Delta");
      ++combos;
      for (double n : {0.5, 1.0, 2.0, 3.0}) {
        const auto d = eval_boundary(repeat("S", L) + "^W(" + real_text(n) + ")", p);
        const auto want = multiple_sle_dressed(L, n, p);
        cmp(d.halfplane_dim, want.x_tilde, tag + fmt(" n=%g x~", n));
        cmp(d.plane_scaling, want.x, tag + fmt(" n=%g x", n));
        ++combos;
      }
    }
  }
  // c = 0 families: Brownian packets, SAW and percolation watermelons.
  const auto c0 = params_from_c(0.0, Phase::Dilute);
  for (int L = 1; L <= 6; ++L) {
    const std::vector<double> ones(static_cast<std::size_t>(L), 1.0);
    cmp(eval_bulk(repeat("B", L), c0).plane_weight, zeta_packets(ones).zeta, fmt("zeta_%d", L));
    cmp(eval_boundary(repeat("B", L), c0).halfplane_dim, zeta_packets(ones).two_zeta_tilde, fmt("2 zeta~_%d", L));
    cmp(eval_boundary(repeat("P", L), c0).halfplane_dim, saw_watermelon(L).x_tilde, fmt("saw x~_%d", L));
    cmp(eval_bulk(repeat("P", L), c0).plane_scaling, saw_watermelon(L).x, fmt("saw x_%d", L));
    combos += 2;
  }
  for (double n1 : {0.5, 1.0, 2.0, 3.0})
    for (double n2 : {0.25, 1.0, 4.0}) {
      const auto e = eval_bulk("W(" + real_text(n1) + ")^W(" + real_text(n2) + ")", c0);
      cmp(e.plane_weight, zeta_packets({n1, n2}).zeta, fmt("zeta(%g,%g)", n1, n2));
      ++combos;
    }
  const auto p6 = params_from_kappa(6.0);
  for (int l = 1; l <= 6; ++l) {
    cmp(eval_boundary(repeat("S", l + 1), p6).halfplane_dim, perc_crossing(l).x_tilde, fmt("perc x~_%d", l));
    cmp(eval_bulk(repeat("S", l), p6).plane_scaling, perc_crossing(l).x, fmt("perc x_%d", l));
    ++combos;
  }
  v.require(combos >= 200 && bad == 0, fmt("%zu (kappa, L, n) combinations, %zu mismatches, max error %.2g", combos, bad, worst));
  return v;
}

Verdict duality() {
  Verdict v;
  double worst_product = 0.0, worst_swap = 0.0, worst_c = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = 4.0 + 4.0 * i / 99.0;
    const auto h = hausdorff_triple(params_from_kappa(k));
    const auto hd = hausdorff_triple(params_from_kappa(16.0 / k));
    worst_product = std::max(worst_product, std::abs((h.d_ep - 1.0) * (h.d_hull - 1.0) - 0.25));
    worst_swap = std::max(worst_swap, std::abs(h.d_ep - hd.d_hull));
  }
  for (int i = 1; i <= 100; ++i) {
    const double k = 16.0 * i / 100.0;
    worst_c = std::max(worst_c, std::abs(c_from_kappa(k) - c_from_kappa(16.0 / k)));
  }
  v.require(worst_product <= 1e-12, fmt("(D_EP-1)(D_H-1) = 1/4 on 100 kappa in [4,8], max error %.2g", worst_product));
  v.require(worst_swap <= 1e-12, fmt("D_EP(kappa) = D_H(16/kappa), max error %.2g", worst_swap));
  v.require(worst_c <= 1e-12, fmt("c(kappa) = c(16/kappa) on 100 kappa in (0,16], max error %.2g", worst_c));
  return v;
}

Verdict multifractal_identities() {
  Verdict v;
  auto at_c = [](double c) { return params_from_c(c, Phase::Dilute); };
  double worst = 0.0;
  for (double c : {-2.0, 0.0, 0.5, 0.8, 1.0}) worst = std::max(worst, std::abs(f_of_alpha(1.0, at_c(c)) - 1.0));
  v.require(worst <= 1e-12, fmt("f(1) = 1 for c in {-2, 0, 1/2, 4/5, 1}, max error %.2g", worst));
  const auto c0 = at_c(0.0);
  v.require(std::abs(f_of_alpha(3.0, c0) - 4.0 / 3.0) <= 1e-12, "f(3; c=0) = 4/3");
  v.require(std::abs(D(2.0, c0) - 11.0 / 12.0) <= 1e-12, "D(2; c=0) = 11/12");
  v.require(std::abs(D(2.0, c0) / D(0.0, c0) - 11.0 / 16.0) <= 1e-12, "D(2)/D(0) = 11/16 at c=0");

  // n' is the moment whose alpha' satisfies (2 alpha - 1)(2 alpha' - 1) = 1.
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> cdist(-10.0, 1.0), udist(0.0, 1.0);
  double worst_d = 0.0, worst_f = 0.0, worst_a = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double c = cdist(rng);
    const auto p = at_c(c);
    const double n = n_star(p) + 1e-6 + 50.0 * udist(rng);
    const double r2 = (24.0 * n + 1.0 - c) / (25.0 - c);
    const double np = ((25.0 - c) / r2 - 1.0 + c) / 24.0;
    const double a = alpha_of_n(n, p), ap = alpha_of_n(np, p);
    worst_d = std::max(worst_d, std::abs(D(n, p) + D(np, p) - 2.0));
    worst_a = std::max(worst_a, std::abs((2 * a - 1) * (2 * ap - 1) - 1.0) / std::max(1.0, 2 * a - 1));
    worst_f = std::max(worst_f, std::abs((f_of_alpha(a, p) - a) - (f_of_alpha(ap, p) - ap)) / std::max(1.0, a + ap));
  }
  v.require(worst_d <= 1e-10, fmt("D(n) + D(n') = 2 on 1e3 random (c, n), max error %.2g", worst_d));
  v.require(worst_a <= 1e-10 && worst_f <= 1e-10,
            fmt("interior-exterior symmetry: alpha pairing %.2g, f(alpha)-alpha %.2g (relative)", worst_a, worst_f));

  double worst_leg = 0.0;
  for (double c : {-2.0, 0.0, 0.5, 0.8})
    for (auto kind : {SpectrumKind::Harmonic, SpectrumKind::Mixed, SpectrumKind::DoubleSided, SpectrumKind::Tip}) {
      const auto p = at_c(c);
      worst_leg = std::max(worst_leg, check_legendre(spectrum_table(kind, p, default_n_grid(p), 0.7, 3.0)));
    }
  v.require(worst_leg < 1e-6, fmt("numeric Legendre transform, 4 kinds x 4 c values, max deviation %.2g", worst_leg));
  return v;
}

void require_comparison(Verdict& v, const kpzlab::Comparison& c, double tol) {
  v.require(std::abs(c.fit.exponent - c.predicted) <= tol,
            fmt("%s = %.4f +- %.4f, predicted %.4f (tolerance %.3g)", c.quantity.c_str(), c.fit.exponent, c.fit.std_error,
                c.predicted, tol));
}

/// Probability that two walkers from (0,0), (1,0) both survive one step, by enumeration.
double rw_one_step_oracle() {
  int alive = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto da = mc::kSquareSteps[a], db = mc::kSquareSteps[b];
      const std::pair<int, int> sa{da.x, da.y}, sb{1 + db.x, db.y};
      const bool a_ok = sa != std::pair<int, int>{1, 0};
      const bool b_ok = sb != std::pair<int, int>{0, 0} && sb != sa;
      alive += a_ok && b_ok;
    }
  return alive / 16.0;
}

Verdict random_walks(unsigned threads) {
  Verdict v;
  const kpzlab::CampaignConfig cfg("rw");
  const auto res = mc::rw_nonintersection(2, cfg.integer("t_max"), cfg.integer("trials"), 12345, threads);
  require_comparison(v, {"zeta_2", res.fit, zeta_brownian(2)}, 0.05);
  const double p = rw_one_step_oracle(), phat = static_cast<double>(res.survivors.front()) / res.trials;
  const double sigma = std::sqrt(p * (1 - p) / res.trials);
  v.require(res.checkpoints.front() == 1 && std::abs(phat - p) <= 3 * sigma,
            fmt("t=1 survival %.4f vs enumeration %.4f (3 sigma = %.4f)", phat, p, 3 * sigma));
  return v;
}

Verdict percolation(unsigned threads) {
  Verdict v;
  const auto r = kpzlab::run_perc(kpzlab::CampaignConfig("perc"), 12345, threads);
  for (const auto& c : r.comparisons)
    require_comparison(v, c, c.quantity == "D_H" ? 0.05 : c.quantity == "D(2)" ? 0.07 : 0.08);
  v.notes.push_back("     " + r.extra.dump());
  return v;
}

Verdict sle(unsigned threads) {
  Verdict v;
  for (double k : {2.0, 8.0 / 3.0, 6.0}) {
    kpzlab::CampaignConfig cfg("sle");
    cfg.set("kappa", real_text(k));
    const auto r = kpzlab::run_sle(cfg, 12345, threads);
    for (const auto& c : r.comparisons)
      require_comparison(v, c, c.quantity == "dimension" ? 0.1 : 0.15 * k);
  }
  return v;
}

Verdict determinism(unsigned threads) {
  Verdict v;
  const unsigned many = std::max(4u, threads);
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"rw", {"trials=2000", "t_max=512"}},
      {"perc", {"radius=64", "clusters=8", "walkers=5000", "harmonic_clusters=3"}},
      {"sle", {"kappa=6", "traces=16", "steps=300", "capacity=6"}},
  };
  for (const auto& [campaign, sets] : runs) {
    kpzlab::CampaignConfig cfg(campaign);
    for (const auto& s : sets) cfg.set_assignment(s);
    const auto a = kpzlab::run_campaign(cfg, 99, 1), b = kpzlab::run_campaign(cfg, 99, many);
    std::size_t bytes = 0;
    for (const auto& f : a.files) bytes += f.second.size();
    v.require(a.files == b.files && kpzlab::report_json(a) == kpzlab::report_json(b),
              fmt("%s: %zu output files (%zu bytes) identical with 1 and %u threads", campaign.c_str(), a.files.size(),
                  bytes, many));
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  unsigned threads = 0;
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"exact catalog suite", exact_catalog},
      {"star algebra matches the catalog", algebra_matches_catalog},
      {"kappa duality", duality},
      {"multifractal identities", multifractal_identities},
      {"random-walk non-intersection", [&] { return random_walks(threads); }},
      {"percolation hull and harmonic moments", [&] { return percolation(threads); }},
      {"SLE dimension and winding", [&] { return sle(threads); }},
      {"determinism across thread counts", [&] { return determinism(threads); }},
  };

  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %d  %s  (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs);
    for (const auto& n : v.notes) std::printf("        %s\n", n.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}
