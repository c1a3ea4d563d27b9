#pragma once

// Run manifests: everything needed to reproduce a simulation campaign, plus
// SHA-256 digests of the files it wrote.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace kpzlab {

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "' for digest");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct OutputDigest {
  std::string file;  // relative to the output directory
  std::string sha256;
  bool operator==(const OutputDigest&) const = default;
};

struct RunManifest {
  static constexpr int kSchema = 1;
  std::string subcommand;
  std::string campaign;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string version;
  std::string git_describe;
  double wall_clock_seconds = 0.0;
  std::vector<OutputDigest> outputs;
  bool operator==(const RunManifest&) const = default;
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : m.outputs) outs.push_back({{"file", o.file}, {"sha256", o.sha256}});
  return {{"schema", RunManifest::kSchema},
          {"subcommand", m.subcommand},
          {"campaign", m.campaign},
          {"params", m.params},
          {"seed", m.seed},
          {"threads", m.threads},
          {"version", m.version},
          {"git_describe", m.git_describe},
          {"wall_clock_seconds", m.wall_clock_seconds},
          {"outputs", outs}};
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  if (j.at("schema").get<int>() != RunManifest::kSchema)
    throw std::runtime_error("unsupported manifest schema " + j.at("schema").dump());
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.campaign = j.at("campaign").get<std::string>();
  m.params = j.at("params").get<std::map<std::string, std::string>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.threads = j.at("threads").get<unsigned>();
  m.version = j.at("version").get<std::string>();
  m.git_describe = j.at("git_describe").get<std::string>();
  m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  for (const auto& o : j.at("outputs")) m.outputs.push_back({o.at("file"), o.at("sha256")});
  return m;
}

/// Files whose digest no longer matches the manifest (missing files included).
inline std::vector<std::string> verify_outputs(const RunManifest& m, const std::filesystem::path& dir) {
  std::vector<std::string> bad;
  for (const auto& o : m.outputs) {
    const auto p = dir / o.file;
    if (!std::filesystem::exists(p) || sha256_file(p) != o.sha256) bad.push_back(o.file);
  }
  return bad;
}

}  // namespace kpzlab
