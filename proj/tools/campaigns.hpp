#pragma once

// Simulation campaigns behind `kpzlab simulate`. Each campaign is a pure
// function of its configuration, seed and thread count: it returns the report
// (estimates against closed-form predictions) and the data files to write,
// as in-memory text, so callers can compare runs byte for byte.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "json.hpp"
#include "kpz/catalog.hpp"
#include "kpz/io.hpp"
#include "kpz/mc/harmonic.hpp"
#include "kpz/mc/percolation.hpp"
#include "kpz/mc/random_walk.hpp"
#include "kpz/mc/sle.hpp"

namespace kpzlab {

struct Comparison {
  std::string quantity;
  kpz::mc::FitResult fit;
  double predicted = 0.0;
  double z() const { return kpz::mc::z_score(fit, predicted); }
};

struct CampaignResult {
  std::string campaign;
  std::vector<Comparison> comparisons;
  nlohmann::json extra = nlohmann::json::object();  // counters worth reporting
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
};

inline nlohmann::json report_json(const CampaignResult& r, int digits = kpz::io::kDefaultDigits) {
  using kpz::io::number;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : r.comparisons)
    rows.push_back({{"quantity", c.quantity},
                    {"estimate", number(c.fit.exponent, digits)},
                    {"stderr", number(c.fit.std_error, digits)},
                    {"predicted", number(c.predicted, digits)},
                    {"z", number(c.z(), digits)},
                    {"fit", kpz::io::to_json(c.fit, digits)}});
  return {{"campaign", r.campaign}, {"comparisons", rows}, {"details", r.extra}};
}

inline std::string render_report(const CampaignResult& r, int digits = kpz::io::kDefaultDigits) {
  using kpz::io::format_number;
  std::ostringstream os;
  os << "campaign " << r.campaign << '\n';
  for (const auto& c : r.comparisons)
    os << "  " << c.quantity << ": estimate " << format_number(c.fit.exponent, digits) << " +- "
       << format_number(c.fit.std_error, digits) << ", predicted " << format_number(c.predicted, digits) << ", z "
       << format_number(c.z(), 4) << '\n';
  for (const auto& [k, v] : r.extra.items()) os << "  " << k << ": " << v.dump() << '\n';
  return os.str();
}

namespace detail {

inline std::string columns_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols,
                                int digits) {
  std::ostringstream os;
  kpz::io::write_columns(os, header, cols, digits);
  return os.str();
}

inline std::string dat_text(const std::vector<double>& x, const std::vector<double>& y, int digits) {
  std::ostringstream os;
  kpz::io::write_dat(os, x, y, digits);
  return os.str();
}

template <class T>
std::vector<double> as_doubles(const std::vector<T>& v) {
  return {v.begin(), v.end()};
}

}  // namespace detail

inline CampaignResult run_rw(const CampaignConfig& cfg, std::uint64_t seed, unsigned threads,
                             int digits = kpz::io::kDefaultDigits) {
  const int L = static_cast<int>(cfg.integer("L"));
  const auto res = kpz::mc::rw_nonintersection(L, cfg.integer("t_max"), cfg.integer("trials"), seed, threads);
  CampaignResult out{"rw", {{"zeta_" + std::to_string(L), res.fit, kpz::zeta_brownian(L)}}, {}, {}};
  const auto t = detail::as_doubles(res.checkpoints);
  std::vector<double> prob;
  for (auto s : res.survivors) prob.push_back(static_cast<double>(s) / static_cast<double>(res.trials));
  out.files.emplace_back("survival.csv",
                         detail::columns_text({"t", "survivors", "probability"}, {t, detail::as_doubles(res.survivors), prob}, digits));
  out.files.emplace_back("survival.dat", detail::dat_text(t, prob, digits));
  out.extra["trials"] = res.trials;
  return out;
}

inline CampaignResult run_perc(const CampaignConfig& cfg, std::uint64_t seed, unsigned threads,
                               int digits = kpz::io::kDefaultDigits) {
  const int radius = static_cast<int>(cfg.integer("radius"));
  const auto count = static_cast<std::size_t>(cfg.integer("clusters"));
  const auto probed = static_cast<std::size_t>(cfg.integer("harmonic_clusters"));
  if (probed > count) throw ConfigError("harmonic_clusters must not exceed clusters\n" + describe_defaults("perc"));
  const auto ens = kpz::mc::perc_ensemble(radius, count, seed, threads);

  CampaignResult out{"perc", {}, {}, {}};
  out.comparisons.push_back({"D_H", kpz::mc::hull_dimension(ens.clusters, seed), 7.0 / 4.0});
  std::vector<double> trial, mass, hull, rg, extent;
  for (const auto& c : ens.clusters) {
    trial.push_back(static_cast<double>(c.trial));
    mass.push_back(static_cast<double>(c.mass));
    hull.push_back(static_cast<double>(c.hull_length));
    rg.push_back(c.radius_gyration);
    extent.push_back(c.extent);
  }
  out.files.emplace_back("clusters.csv", detail::columns_text({"trial", "mass", "hull_length", "radius_gyration", "extent"},
                                                              {trial, mass, hull, rg, extent}, digits));
  out.files.emplace_back("hull.dat", detail::dat_text(rg, hull, digits));
  out.extra["attempts"] = ens.attempts;
  out.extra["resampled_small"] = ens.resampled_small;
  out.extra["resampled_truncated"] = ens.resampled_truncated;

  const auto moments = cfg.list("moments");
  if (probed > 0 && !moments.empty()) {
    kpz::mc::HarmonicOptions opt;
    opt.launch_ratio = cfg.real("launch_ratio");
    opt.outer_ratio = cfg.real("outer_ratio");
    opt.threads = threads;
    std::vector<kpz::mc::PercCluster> clusters;
    std::vector<kpz::mc::HitMap> maps;
    std::int64_t discarded = 0;
    for (std::size_t k = 0; k < probed; ++k) {
      const auto trial_id = ens.clusters[k].trial;
      clusters.push_back(kpz::mc::perc_cluster(radius, seed, trial_id));
      maps.push_back(kpz::mc::harmonic_measure(clusters.back(), cfg.integer("walkers"),
                                               kpz::mc::derive_seed(seed, trial_id), opt));
      discarded += maps.back().discarded;
    }
    const auto est = kpz::mc::harmonic_moments(clusters, maps, moments);
    std::vector<std::string> header{"r"};
    std::vector<std::vector<double>> cols{est.front().box_sizes};
    std::vector<double> ns, taus, tau_err, Ds, D_err, D_exact;
    for (const auto& e : est) {
      if (e.n != 1.0) {
        kpz::mc::FitResult f = e.tau;
        f.exponent = e.D;
        f.std_error = e.D_error;
        out.comparisons.push_back({"D(" + kpz::io::format_number(e.n) + ")", f, kpz::perc_harmonic(e.n).D});
      }
      header.push_back("Z_" + kpz::io::format_number(e.n));
      cols.push_back(e.z_mean);
      ns.push_back(e.n);
      taus.push_back(e.tau.exponent);
      tau_err.push_back(e.tau.std_error);
      Ds.push_back(e.D);
      D_err.push_back(e.D_error);
      D_exact.push_back(kpz::perc_harmonic(e.n).D);
    }
    out.files.emplace_back("moments.csv", detail::columns_text({"n", "tau", "tau_stderr", "D", "D_stderr", "D_exact"},
                                                               {ns, taus, tau_err, Ds, D_err, D_exact}, digits));
    out.files.emplace_back("box_moments.csv", detail::columns_text(header, cols, digits));
    out.files.emplace_back("moments.dat", detail::dat_text(ns, Ds, digits));
    out.extra["walkers_discarded"] = discarded;
  }
  return out;
}

inline CampaignResult run_sle(const CampaignConfig& cfg, std::uint64_t seed, unsigned threads,
                              int digits = kpz::io::kDefaultDigits) {
  const double kappa = cfg.real("kappa");
  const auto traces = static_cast<std::size_t>(cfg.integer("traces"));
  const auto steps = static_cast<std::size_t>(cfg.integer("steps"));
  CampaignResult out{"sle", {}, {}, {}};
  kpz::mc::ScaleSeries dim;
  std::uint64_t perturbations = 0;
  {
    const auto ens = kpz::mc::sle_ensemble(kappa, traces, steps, cfg.real("dt"), seed, threads);
    for (const auto& tr : ens.traces) perturbations += tr.perturbations;
    dim = kpz::mc::sle_dimension(ens.traces);
  }
  out.comparisons.push_back({"dimension", dim.fit, std::min(2.0, 1.0 + kappa / 8.0)});
  out.files.emplace_back("dimension.csv", detail::columns_text({"capacity_radius", "boxes"}, {dim.scales, dim.values}, digits));
  out.files.emplace_back("dimension.dat", detail::dat_text(dim.scales, dim.values, digits));

  const auto radial = kpz::mc::sle_radial_ensemble(kappa, traces, steps, cfg.real("capacity"),
                                                   kpz::mc::derive_seed(seed, 1), threads);
  for (const auto& tr : radial) perturbations += tr.perturbations;
  const auto wind = kpz::mc::sle_winding_variance(radial);
  out.comparisons.push_back({"winding_slope", wind.fit, kappa});
  std::vector<double> log_inv;
  for (double d : wind.scales) log_inv.push_back(std::log(1.0 / d));
  out.files.emplace_back("winding.csv", detail::columns_text({"distance", "variance"}, {wind.scales, wind.values}, digits));
  out.files.emplace_back("winding.dat", detail::dat_text(log_inv, wind.values, digits));
  out.extra["slit_perturbations"] = perturbations;
  return out;
}

inline CampaignResult run_campaign(const CampaignConfig& cfg, std::uint64_t seed, unsigned threads,
                                   int digits = kpz::io::kDefaultDigits) {
  if (cfg.campaign() == "rw") return run_rw(cfg, seed, threads, digits);
  if (cfg.campaign() == "perc") return run_perc(cfg, seed, threads, digits);
  return run_sle(cfg, seed, threads, digits);
}

}  // namespace kpzlab
