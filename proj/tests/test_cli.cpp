// Runs the kpzlab binary and compares its JSON output against tests/golden.
// Set KPZ_UPDATE_GOLDEN=1 to rewrite the golden files.
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "catch_amalgamated.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run kpzlab(const std::string& args) {
  const std::string cmd = std::string(KPZLAB_EXE) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  while (auto n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Numbers agree to 1e-9 relative; everything else exactly.
bool same(const json& a, const json& b, const std::string& where, std::string& why) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    if (std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y))) return true;
    why = where + ": " + a.dump() + " vs " + b.dump();
    return false;
  }
  if (a.type() != b.type() || a.size() != b.size()) {
    why = where + ": shape differs";
    return false;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) {
        why = where + ": unexpected key " + it.key();
        return false;
      }
      if (!same(it.value(), b.at(it.key()), where + "." + it.key(), why)) return false;
    }
    return true;
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!same(a[i], b[i], where + "[" + std::to_string(i) + "]", why)) return false;
    return true;
  }
  if (a != b) why = where + ": " + a.dump() + " vs " + b.dump();
  return a == b;
}

void check_golden(const std::string& name, const json& got) {
  const fs::path file = fs::path(KPZ_GOLDEN_DIR) / (name + ".json");
  if (std::getenv("KPZ_UPDATE_GOLDEN")) {
    std::ofstream(file) << got.dump(2) << '\n';
    return;
  }
  REQUIRE(fs::exists(file));
  const json want = json::parse(slurp(file));
  std::string why;
  const bool ok = same(got, want, name, why);
  INFO(why);
  CHECK(ok);
}

void golden_stdout(const std::string& name, const std::string& args) {
  const auto r = kpzlab("--json " + args);
  INFO(args);
  REQUIRE(r.code == 0);
  check_golden(name, json::parse(r.out));
}

}  // namespace

TEST_CASE("exponent goldens") {
  golden_stdout("exponent_bb", "exponent 'B^B' --c 0");
  golden_stdout("exponent_ppp_bulk", "exponent 'P^P^P' --kappa 6 --bulk");
  golden_stdout("exponent_dual", "exponent 'S^B' --kappa 6");
  golden_stdout("exponent_nested", "exponent 'W(2)^(B^B)' --c -2");
}

TEST_CASE("spectrum goldens") {
  golden_stdout("spectrum_harmonic", "spectrum harmonic --kappa 6 --points 8 --n-max 20");
  golden_stdout("spectrum_mixed", "spectrum mixed --c 0 --lambda 0.5 --n 0,1,2");
  golden_stdout("spectrum_double", "spectrum double --c 0 --alpha-prime 2 --n 0,1");
  golden_stdout("spectrum_tip", "spectrum tip --c -2 --n 0,1,2 --check-legendre");
}

TEST_CASE("table goldens") {
  golden_stdout("table_potts", "table potts");
  golden_stdout("table_duality", "table duality --points 5");
}

TEST_CASE("text output") {
  const auto r = kpzlab("exponent 'B^B' --c 0");
  CHECK(r.code == 0);
  CHECK(r.out.find("plane_weight   0.625 (5/8)") != std::string::npos);
  const auto e = kpzlab("--exact-check");
  CHECK(e.code == 0);
  CHECK(e.out.find("31/31 identities hold") != std::string::npos);
  CHECK(kpzlab("--version").out.find("0.1.0") != std::string::npos);
  const auto sf = kpzlab("--json exponent 'S^S' --kappa 9");
  CHECK(sf.code == 0);
  CHECK(json::parse(sf.out).at("params").at("space_filling") == true);
  CHECK_FALSE(json::parse(kpzlab("--json exponent 'S^S' --kappa 6").out).at("params").contains("space_filling"));
}

TEST_CASE("simulation outputs and manifest") {
  const fs::path dir = fs::temp_directory_path() / "kpzlab-cli-rw";
  fs::remove_all(dir);
  const std::string common = "simulate rw --set trials=500 --set t_max=256 --seed 3 --out ";
  REQUIRE(kpzlab("--threads 1 " + common + dir.string()).code == 0);
  for (const char* f : {"survival.csv", "survival.dat", "report.json", "manifest.json"}) CHECK(fs::exists(dir / f));
  check_golden("simulate_rw_report", json::parse(slurp(dir / "report.json")));

  const auto manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("seed") == 3);
  CHECK(manifest.at("params").at("trials") == "500");
  CHECK(manifest.at("outputs").size() == 3);

  const fs::path dir3 = fs::temp_directory_path() / "kpzlab-cli-rw3";
  fs::remove_all(dir3);
  REQUIRE(kpzlab("--threads 3 " + common + dir3.string()).code == 0);
  for (const char* f : {"survival.csv", "survival.dat", "report.json"}) CHECK(slurp(dir / f) == slurp(dir3 / f));
  CHECK(json::parse(slurp(dir3 / "manifest.json")).at("outputs") == manifest.at("outputs"));

  const fs::path perc = fs::temp_directory_path() / "kpzlab-cli-perc";
  fs::remove_all(perc);
  REQUIRE(kpzlab("simulate perc --set radius=64 --set clusters=8 --set walkers=5000 --set harmonic_clusters=3 --out " +
                 perc.string()).code == 0);
  check_golden("simulate_perc_report", json::parse(slurp(perc / "report.json")));

  const fs::path sle = fs::temp_directory_path() / "kpzlab-cli-sle";
  fs::remove_all(sle);
  REQUIRE(kpzlab("simulate sle --set traces=20 --set steps=200 --set kappa=2 --out " + sle.string()).code == 0);
  check_golden("simulate_sle_report", json::parse(slurp(sle / "report.json")));
  for (const auto& d : {dir, dir3, perc, sle}) fs::remove_all(d);
}

TEST_CASE("exit codes") {
  CHECK(kpzlab("exponent 'B^'  --c 0").code == 2);         // parse error
  CHECK(kpzlab("exponent 'Q^B' --c 0").code == 2);         // unknown symbol
  CHECK(kpzlab("exponent B --c 2").code == 2);             // c > 1
  CHECK(kpzlab("exponent B --c 0 --kappa 2").code == 2);   // exclusive options
  CHECK(kpzlab("spectrum mixed --c 0").code == 2);         // needs --lambda
  CHECK(kpzlab("spectrum wedge --c 0").code == 2);         // unknown kind
  CHECK(kpzlab("frobnicate").code == 2);
  CHECK(kpzlab("simulate rw --set walkers=3 --out /tmp/kpzlab-cli-bad").code == 2);
  CHECK(kpzlab("simulate rw --set trials=many --out /tmp/kpzlab-cli-bad").code == 2);
  CHECK(kpzlab("simulate rw --config /nonexistent.cfg --out /tmp/kpzlab-cli-bad").code == 2);
  // Too few clusters to fit: a statistics failure, not a usage error.
  CHECK(kpzlab("simulate perc --set radius=24 --set clusters=4 --set walkers=2000 --set harmonic_clusters=2 "
               "--out /tmp/kpzlab-cli-bad").code == 1);
  fs::remove_all("/tmp/kpzlab-cli-bad");
}
