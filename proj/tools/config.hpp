#pragma once

// Campaign configuration: UTF-8 `key=value` lines, `#` starts a comment.
// Every campaign has a fixed key set with defaults; keys that are absent take
// the default, unknown or malformed keys are an error that lists the defaults.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kpzlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KeyType { Int, Real, RealList };

struct KeySpec {
  std::string name;
  KeyType type;
  std::string default_value;
  std::string help;
};

inline const std::vector<KeySpec>& campaign_keys(const std::string& campaign) {
  static const std::map<std::string, std::vector<KeySpec>> table = {
      {"rw",
       {{"L", KeyType::Int, "2", "number of walkers"},
        {"trials", KeyType::Int, "20000", "independent trials"},
        {"t_max", KeyType::Int, "4096", "longest survival time followed"}}},
      {"perc",
       {{"radius", KeyType::Int, "256", "growth radius R (hex distance)"},
        {"clusters", KeyType::Int, "200", "accepted clusters for the hull fit"},
        {"walkers", KeyType::Int, "200000", "harmonic walkers per cluster"},
        {"harmonic_clusters", KeyType::Int, "16", "clusters probed by walkers"},
        {"launch_ratio", KeyType::Real, "2", "launch circle / cluster radius"},
        {"outer_ratio", KeyType::Real, "4", "reflecting circle / cluster radius"},
        {"moments", KeyType::RealList, "2,3,4", "harmonic moment orders n"}}},
      {"sle",
       {{"kappa", KeyType::Real, "6", "SLE parameter"},
        {"traces", KeyType::Int, "1000", "traces per estimator"},
        {"steps", KeyType::Int, "2000", "Loewner steps per trace"},
        {"dt", KeyType::Real, "0.0001", "chordal capacity step"},
        {"capacity", KeyType::Real, "8", "total log-capacity of radial traces"}}},
  };
  const auto it = table.find(campaign);
  if (it == table.end()) throw ConfigError("unknown campaign '" + campaign + "' (expected rw, perc or sle)");
  return it->second;
}

inline std::string describe_defaults(const std::string& campaign) {
  std::ostringstream os;
  os << "accepted keys for '" << campaign << "' (defaults):";
  for (const auto& k : campaign_keys(campaign)) os << "\n  " << k.name << '=' << k.default_value << "  # " << k.help;
  return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

inline bool parse_real(std::string_view s, double& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size() && std::isfinite(out);
}

inline bool parse_list(std::string_view s, std::vector<double>& out) {
  out.clear();
  while (true) {
    const auto comma = s.find(',');
    double v = 0.0;
    if (!parse_real(trim(s.substr(0, comma)), v)) return false;
    out.push_back(v);
    if (comma == std::string_view::npos) return true;
    s.remove_prefix(comma + 1);
  }
}

}  // namespace detail

class CampaignConfig {
 public:
  explicit CampaignConfig(std::string campaign) : campaign_(std::move(campaign)) {
    for (const auto& k : campaign_keys(campaign_)) values_[k.name] = k.default_value;
  }

  const std::string& campaign() const { return campaign_; }

  /// Sets one key; `origin` names the source for error messages.
  void set(std::string_view key, std::string_view value, const std::string& origin = "--set") {
    key = detail::trim(key);
    value = detail::trim(value);
    const KeySpec* spec = nullptr;
    for (const auto& k : campaign_keys(campaign_))
      if (k.name == key) spec = &k;
    if (!spec) throw ConfigError(origin + ": unknown key '" + std::string(key) + "'\n" + describe_defaults(campaign_));
    std::int64_t i = 0;
    double r = 0.0;
    std::vector<double> list;
    const bool ok = spec->type == KeyType::Int    ? detail::parse_int(value, i)
                    : spec->type == KeyType::Real ? detail::parse_real(value, r)
                                                  : detail::parse_list(value, list);
    if (!ok)
      throw ConfigError(origin + ": malformed value '" + std::string(value) + "' for key '" + spec->name + "'\n" +
                        describe_defaults(campaign_));
    values_[spec->name] = std::string(value);
  }

  /// One `key=value` assignment, as given to --set.
  void set_assignment(std::string_view line, const std::string& origin = "--set") {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(origin + ": expected key=value, got '" + std::string(line) + "'\n" + describe_defaults(campaign_));
    set(line.substr(0, eq), line.substr(eq + 1), origin);
  }

  void load(std::istream& in, const std::string& name) {
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
      std::string_view s = line;
      if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
      s = detail::trim(s);
      if (s.empty()) continue;
      set_assignment(s, name + ":" + std::to_string(lineno));
    }
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    load(in, path);
  }

  std::int64_t integer(const std::string& key) const {
    std::int64_t v = 0;
    detail::parse_int(values_.at(key), v);
    return v;
  }
  double real(const std::string& key) const {
    double v = 0.0;
    detail::parse_real(values_.at(key), v);
    return v;
  }
  std::vector<double> list(const std::string& key) const {
    std::vector<double> v;
    detail::parse_list(values_.at(key), v);
    return v;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::string campaign_;
  std::map<std::string, std::string> values_;
};

}  // namespace kpzlab
