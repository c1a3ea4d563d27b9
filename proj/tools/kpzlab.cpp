// kpzlab: exponent queries, spectrum tables, Potts/duality tables and Monte
// Carlo campaigns. Exit codes: 0 ok, 1 runtime or statistics failure,
// 2 usage, parse or domain error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "campaigns.hpp"
#include "config.hpp"
#include "json.hpp"
#include "kpz/identities.hpp"
#include "kpz/io.hpp"
#include "kpz/multifractal.hpp"
#include "kpz/params.hpp"
#include "kpz/star_algebra.hpp"
#include "manifest.hpp"

#ifndef KPZLAB_VERSION
#define KPZLAB_VERSION "0.0.0"
#endif
#ifndef KPZLAB_GIT_DESCRIBE
#define KPZLAB_GIT_DESCRIBE "unknown"
#endif

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum Exit : int { kOk = 0, kRuntime = 1, kUsage = 2 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json = false;
  int digits = kpz::io::kDefaultDigits;
  unsigned threads = 1;
  bool exact_check = false;
};

struct ParamFlags {
  std::optional<double> kappa;
  std::optional<double> c;
  std::string phase = "dilute";
  CLI::Option* phase_opt = nullptr;

  void add(CLI::App* cmd) {
    auto* k = cmd->add_option("--kappa", kappa, "SLE parameter");
    auto* c_opt = cmd->add_option("--c", c, "central charge (c <= 1)");
    phase_opt = cmd->add_option("--phase", phase, "dilute or dense (with --c)")
                    ->check(CLI::IsMember({"dilute", "dense"}));
    k->excludes(c_opt);
    k->excludes(phase_opt);
  }

  kpz::SystemParams resolve() const {
    if (!kappa && !c) throw UsageError("one of --kappa or --c is required");
    const kpz::SystemParams p =
        kappa ? kpz::params_from_kappa(*kappa)
              : kpz::params_from_c(*c, phase == "dense" ? kpz::Phase::Dense : kpz::Phase::Dilute);
    if (p.space_filling())
      std::cerr << "kpzlab: warning: kappa >= 8 is space-filling; dimensions and other geometric readings do not apply\n";
    return p;
  }
};

std::string num(double v, const Globals& g) { return kpz::io::format_number(v, g.digits); }

/// Decimal, with the exact fraction alongside when there is a small one.
std::string num_rational(double v, const Globals& g) {
  if (std::abs(v) < 1e-13) v = 0.0;  // e.g. c at kappa = 4/g with g = 2/3
  const std::string r = kpz::io::rational_string(v);
  const std::string d = num(v, g);
  return r.empty() || r == d ? d : d + " (" + r + ")";
}

std::string params_line(const kpz::SystemParams& p, const Globals& g) {
  return "kappa=" + num(p.kappa, g) + " c=" + num(p.c, g) + " phase=" + std::string(kpz::to_string(p.phase));
}

// ---------------------------------------------------------------------------

int exact_check(const Globals& g, std::ostream& out) {
  const auto checks = kpz::exact_identities();
  std::size_t failed = 0;
  json rows = json::array();
  for (const auto& c : checks) {
    const bool ok = c.ok(1e-12);
    failed += ok ? 0 : 1;
    if (g.json)
      rows.push_back({{"name", c.name},
                      {"computed", kpz::io::number(c.computed, g.digits)},
                      {"expected", kpz::io::number(c.expected, g.digits)},
                      {"ok", ok}});
    else
      out << (ok ? "ok   " : "FAIL ") << c.name << " = " << num(c.computed, g) << " (expected " << num(c.expected, g)
          << ", |diff| " << kpz::io::format_number(c.error(), 3) << ")\n";
  }
  if (g.json)
    out << json{{"exact_check", rows}, {"tolerance", 1e-12}, {"failed", failed}}.dump(2) << '\n';
  else
    out << checks.size() - failed << "/" << checks.size() << " identities hold to 1e-12\n";
  return failed == 0 ? kOk : kRuntime;
}

int cmd_exponent(const Globals& g, const std::string& expr, const ParamFlags& pf, bool bulk, std::ostream& out) {
  const kpz::SystemParams p = pf.resolve();
  const kpz::StarExpr e = kpz::parse(expr);
  const kpz::ExponentSet s = kpz::evaluate(e, p, bulk ? kpz::Context::Bulk : kpz::Context::Boundary);
  if (g.json) {
    out << json{{"expression", kpz::to_string(e)}, {"params", kpz::io::to_json(p, g.digits)},
                {"exponents", kpz::io::to_json(s, g.digits)}}
               .dump(2)
        << '\n';
    return kOk;
  }
  out << "expression     " << kpz::to_string(e) << '\n'
      << "params         " << params_line(p, g) << '\n'
      << "context        " << (bulk ? "bulk" : "boundary") << '\n'
      << "channel        " << (s.channel == kpz::Channel::Dual ? "dual" : "standard") << " (kappa "
      << num_rational(s.channel_kappa, g) << ")\n"
      << "qg_boundary    " << num_rational(s.qg_boundary, g) << '\n'
      << "halfplane_dim  " << num_rational(s.halfplane_dim, g) << '\n'
      << "plane_weight   " << num_rational(s.plane_weight, g) << '\n'
      << "plane_scaling  " << num_rational(s.plane_scaling, g) << '\n'
      << "qg_bulk        " << num_rational(s.qg_bulk, g) << '\n';
  return kOk;
}

struct SpectrumFlags {
  std::string kind;
  std::optional<double> lambda;
  double alpha_prime = 3.0;
  std::vector<double> n_list;
  std::size_t points = 200;
  double n_max = 1e3;
  double n_offset = 1e-6;
  bool check_legendre = false;
  std::string csv_path, dat_path;
};

kpz::SpectrumKind spectrum_kind(const std::string& k) {
  if (k == "harmonic") return kpz::SpectrumKind::Harmonic;
  if (k == "mixed") return kpz::SpectrumKind::Mixed;
  if (k == "double") return kpz::SpectrumKind::DoubleSided;
  return kpz::SpectrumKind::Tip;
}

int cmd_spectrum(const Globals& g, const SpectrumFlags& sf, const ParamFlags& pf, std::ostream& out) {
  const kpz::SystemParams p = pf.resolve();
  const kpz::SpectrumKind kind = spectrum_kind(sf.kind);
  if (kind == kpz::SpectrumKind::Mixed && !sf.lambda) throw UsageError("spectrum mixed requires --lambda");
  std::vector<double> grid = sf.n_list;
  if (grid.empty()) {
    grid = kpz::default_n_grid(p, sf.points, sf.n_max, sf.n_offset);
    // Integer moments are the ones people look up; make sure they are rows.
    for (double n : {0.0, 1.0, 2.0, 3.0, 4.0})
      if (n > kpz::n_star(p) && n <= sf.n_max && std::find(grid.begin(), grid.end(), n) == grid.end()) grid.push_back(n);
  }
  for (double n : grid)
    if (!(n > kpz::n_star(p))) throw kpz::DomainError("spectrum: every n must exceed n* = " + num(kpz::n_star(p), g));
  const double lambda = sf.lambda.value_or(0.0);
  const kpz::SpectrumTable table = kpz::spectrum_table(kind, p, grid, lambda, sf.alpha_prime);

  std::vector<std::pair<std::string, double>> summary{{"n_star", kpz::n_star(p)}};
  switch (kind) {
    case kpz::SpectrumKind::Harmonic:
      summary.emplace_back("D_EP", kpz::d_ep(p));
      summary.emplace_back("alpha_hat", kpz::alpha_hat(p));
      summary.emplace_back("theta_hat", kpz::theta_hat(p));
      break;
    case kpz::SpectrumKind::Mixed: summary.emplace_back("D_EP_lambda", kpz::d_ep_lambda(lambda, p)); break;
    default: break;
  }
  std::optional<double> deviation;
  if (sf.check_legendre) {
    deviation = kpz::check_legendre(table);
    summary.emplace_back("legendre_max_deviation", *deviation);
  }

  if (!sf.csv_path.empty()) {
    std::ofstream f(sf.csv_path);
    if (!f) throw std::runtime_error("cannot write '" + sf.csv_path + "'");
    kpz::io::write_csv(f, table, g.digits);
  }
  if (!sf.dat_path.empty()) {
    std::ofstream f(sf.dat_path);
    if (!f) throw std::runtime_error("cannot write '" + sf.dat_path + "'");
    std::vector<double> a, fa;
    for (const auto& r : table.rows) a.push_back(r.alpha), fa.push_back(r.f);
    kpz::io::write_dat(f, a, fa, g.digits);
  }

  if (g.json) {
    json js = json::object();
    for (const auto& [k, v] : summary) js[k] = kpz::io::number(v, k == "legendre_max_deviation" ? 3 : g.digits);
    out << json{{"summary", js}, {"table", kpz::io::to_json(table, g.digits)}}.dump(2) << '\n';
  } else {
    out << "# " << sf.kind << " spectrum, " << params_line(p, g);
    if (kind == kpz::SpectrumKind::Mixed) out << " lambda=" << num(lambda, g);
    if (kind == kpz::SpectrumKind::DoubleSided) out << " alpha'=" << num(sf.alpha_prime, g);
    out << '\n';
    for (const auto& [k, v] : summary)
      out << "# " << k << " = " << (k == "legendre_max_deviation" ? kpz::io::format_number(v, 3) : num(v, g)) << '\n';
    if (sf.csv_path.empty()) kpz::io::write_csv(out, table, g.digits);
  }
  if (deviation && !(*deviation < 1e-6)) {
    std::cerr << "kpzlab: Legendre check failed, max deviation " << kpz::io::format_number(*deviation, 3) << '\n';
    return kRuntime;
  }
  return kOk;
}

int cmd_table_potts(const Globals& g, const std::vector<double>& qs, std::ostream& out) {
  json rows = json::array();
  if (!g.json)
    out << std::left << std::setw(6) << "Q" << std::setw(30) << "g" << std::setw(30) << "kappa" << std::setw(30) << "c"
        << std::setw(30) << "D_EP" << std::setw(30) << "D_H" << "D_SC\n";
  for (double Q : qs) {
    if (!(Q >= 0.0 && Q <= 4.0)) throw kpz::DomainError("potts: Q in [0, 4]");
    const double gc = kpz::potts_coupling(Q);
    const kpz::SystemParams p = kpz::params_from_kappa(4.0 / gc);
    const kpz::HausdorffTriple h = kpz::hausdorff_triple(p);
    const double vals[] = {gc, p.kappa, p.c, h.d_ep, h.d_hull, h.d_sc};
    if (g.json) {
      json r = {{"Q", kpz::io::number(Q, g.digits)}};
      const char* names[] = {"g", "kappa", "c", "D_EP", "D_H", "D_SC"};
      for (int i = 0; i < 6; ++i) {
        r[names[i]] = kpz::io::number(vals[i], g.digits);
        r[std::string(names[i]) + "_exact"] = kpz::io::rational_string(vals[i]);
      }
      rows.push_back(r);
    } else {
      out << std::setw(6) << num(Q, g);
      for (int i = 0; i < 6; ++i) out << std::setw(i < 5 ? 30 : 0) << num_rational(vals[i], g);
      out << '\n';
    }
  }
  if (g.json) out << json{{"table", "potts"}, {"rows", rows}}.dump(2) << '\n';
  return kOk;
}

int cmd_table_duality(const Globals& g, double kmin, double kmax, std::size_t points, std::ostream& out) {
  if (!(kmin > 0.0 && kmax >= kmin) || points < 1) throw UsageError("duality: need 0 < kappa-min <= kappa-max, points >= 1");
  json rows = json::array();
  if (!g.json) out << "kappa,kappa_dual,D_H,D_EP,D_H_dual,product\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double k = points == 1 ? kmin : kmin + (kmax - kmin) * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto h = kpz::hausdorff_triple(kpz::params_from_kappa(k));
    const auto hd = kpz::hausdorff_triple(kpz::params_from_kappa(16.0 / k));
    const double prod = (h.d_ep - 1.0) * (h.d_hull - 1.0);
    const double vals[] = {k, 16.0 / k, h.d_hull, h.d_ep, hd.d_hull, prod};
    if (g.json) {
      rows.push_back({{"kappa", kpz::io::number(vals[0], g.digits)},
                      {"kappa_dual", kpz::io::number(vals[1], g.digits)},
                      {"D_H", kpz::io::number(vals[2], g.digits)},
                      {"D_EP", kpz::io::number(vals[3], g.digits)},
                      {"D_H_dual", kpz::io::number(vals[4], g.digits)},
                      {"product", kpz::io::number(vals[5], g.digits)}});
    } else {
      for (int j = 0; j < 6; ++j) out << (j ? "," : "") << num(vals[j], g);
      out << '\n';
    }
  }
  if (g.json) out << json{{"table", "duality"}, {"rows", rows}}.dump(2) << '\n';
  return kOk;
}

struct SimulateFlags {
  std::string campaign;
  std::string config_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 12345;
  std::string out_dir;
};

int cmd_simulate(const Globals& g, const SimulateFlags& sf, std::ostream& out) {
  kpzlab::CampaignConfig cfg(sf.campaign);
  if (!sf.config_path.empty()) cfg.load_file(sf.config_path);
  for (const auto& s : sf.sets) cfg.set_assignment(s);

  const auto t0 = std::chrono::steady_clock::now();
  const kpzlab::CampaignResult res = kpzlab::run_campaign(cfg, sf.seed, g.threads, g.digits);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir = sf.out_dir.empty() ? fs::path("kpzlab-" + sf.campaign) : fs::path(sf.out_dir);
  fs::create_directories(dir);
  const json report = kpzlab::report_json(res, g.digits);
  std::vector<std::pair<std::string, std::string>> files = res.files;
  files.emplace_back("report.json", report.dump(2) + "\n");

  kpzlab::RunManifest m;
  m.subcommand = "simulate";
  m.campaign = sf.campaign;
  m.params = cfg.values();
  m.seed = sf.seed;
  m.threads = g.threads;
  m.version = KPZLAB_VERSION;
  m.git_describe = KPZLAB_GIT_DESCRIBE;
  m.wall_clock_seconds = wall;
  for (const auto& [name, text] : files) {
    std::ofstream f(dir / name, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
    f.close();
    m.outputs.push_back({name, kpzlab::sha256_file(dir / name)});
  }
  std::ofstream(dir / "manifest.json") << kpzlab::to_json(m).dump(2) << '\n';

  if (g.json)
    out << json{{"report", report}, {"manifest", (dir / "manifest.json").string()}}.dump(2) << '\n';
  else
    out << kpzlab::render_report(res, g.digits) << "  outputs: " << dir.string() << " (manifest.json)\n";
  return kOk;
}

void print_parse_error(const kpz::ParseError& e, const std::string& expr) {
  std::cerr << "kpzlab: " << e.what() << "\n  " << expr << "\n  " << std::string(e.offset(), ' ') << "^\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpzlab: conformal exponents, multifractal spectra and Monte Carlo checks", "kpzlab"};
  app.set_version_flag("--version", std::string(KPZLAB_VERSION) + " (" + KPZLAB_GIT_DESCRIBE + ")");
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "machine-readable JSON output");
  app.add_option("--digits", g.digits, "significant digits in output")->check(CLI::Range(1, 17));
  app.add_option("--threads", g.threads, "worker threads for simulations (0 = all cores)");
  app.add_flag("--exact-check", g.exact_check, "re-verify the exact catalog identities at 1e-12");

  auto* exponent = app.add_subcommand("exponent", "exponents of a star-algebra expression");
  std::string expr;
  ParamFlags exp_params;
  bool boundary = false, bulk = false;
  exponent->add_option("expression", expr, "e.g. \"B^B\", \"P^P^P\", \"(S^S) v B\"")->required();
  exp_params.add(exponent);
  auto* b_flag = exponent->add_flag("--boundary", boundary, "boundary context (default)");
  exponent->add_flag("--bulk", bulk, "bulk context")->excludes(b_flag);

  auto* spectrum = app.add_subcommand("spectrum", "multifractal spectrum table");
  SpectrumFlags sf;
  ParamFlags spec_params;
  spectrum->add_option("kind", sf.kind, "harmonic, mixed, double or tip")
      ->required()
      ->check(CLI::IsMember({"harmonic", "mixed", "double", "tip"}));
  spec_params.add(spectrum);
  spectrum->add_option("--lambda", sf.lambda, "rotation moment (mixed)");
  spectrum->add_option("--alpha-prime", sf.alpha_prime, "exponent held fixed on the other side (double)");
  spectrum->add_option("--n", sf.n_list, "explicit moment list, comma separated")->delimiter(',');
  spectrum->add_option("--points", sf.points, "default grid size");
  spectrum->add_option("--n-max", sf.n_max, "default grid upper end");
  spectrum->add_option("--n-offset", sf.n_offset, "default grid starts at n* + offset");
  spectrum->add_flag("--check-legendre", sf.check_legendre, "compare with a numeric Legendre transform");
  spectrum->add_option("--out", sf.csv_path, "write the CSV table here");
  spectrum->add_option("--dat", sf.dat_path, "write alpha f(alpha) plot data here");

  auto* table = app.add_subcommand("table", "Potts dimensions or duality sweep");
  std::string table_kind;
  std::vector<double> qs{0, 1, 2, 3, 4};
  double kmin = 4.0, kmax = 8.0;
  std::size_t kpoints = 9;
  table->add_option("kind", table_kind, "potts or duality")->required()->check(CLI::IsMember({"potts", "duality"}));
  table->add_option("--q", qs, "Potts Q values, comma separated")->delimiter(',');
  table->add_option("--kappa-min", kmin, "duality sweep start");
  table->add_option("--kappa-max", kmax, "duality sweep end");
  table->add_option("--points", kpoints, "duality sweep points");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo campaign: rw, perc or sle");
  SimulateFlags sim;
  simulate->add_option("campaign", sim.campaign, "rw, perc or sle")->required()->check(CLI::IsMember({"rw", "perc", "sle"}));
  simulate->add_option("--config", sim.config_path, "key=value config file");
  simulate->add_option("--set", sim.sets, "key=value overrides (after the config file)")->expected(1, -1);
  simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--out", sim.out_dir, "output directory (default kpzlab-<campaign>)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::ostream& out = std::cout;
  try {
    int rc = kOk;
    if (g.exact_check) rc = exact_check(g, out);
    if (exponent->parsed()) return std::max(rc, cmd_exponent(g, expr, exp_params, bulk, out));
    if (spectrum->parsed()) return std::max(rc, cmd_spectrum(g, sf, spec_params, out));
    if (table->parsed())
      return std::max(rc, table_kind == "potts" ? cmd_table_potts(g, qs, out) : cmd_table_duality(g, kmin, kmax, kpoints, out));
    if (simulate->parsed()) return std::max(rc, cmd_simulate(g, sim, out));
    if (!g.exact_check) {
      std::cerr << app.help();
      return kUsage;
    }
    return rc;
  } catch (const kpz::ParseError& e) {
    print_parse_error(e, expr);
    return kUsage;
  } catch (const kpz::DomainError& e) {
    std::cerr << "kpzlab: domain error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "kpzlab: " << e.what() << '\n';
    return kUsage;
  } catch (const kpzlab::ConfigError& e) {
    std::cerr << "kpzlab: config error: " << e.what() << '\n';
    return kUsage;
  } catch (const kpz::StatisticsError& e) {
    std::cerr << "kpzlab: statistics failure: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "kpzlab: " << e.what() << '\n';
    return kRuntime;
  }
}
