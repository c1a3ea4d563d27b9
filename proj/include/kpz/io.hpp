#pragma once

// CSV and JSON renderings of the library's result types. JSON goes through
// nlohmann::json; numbers are written at 12 significant digits unless the
// caller asks for more.

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kpz/multifractal.hpp"
#include "kpz/params.hpp"
#include "kpz/star_algebra.hpp"
#include "kpz/mc/fit.hpp"

namespace kpz::io {

using nlohmann::json;

inline constexpr int kDefaultDigits = 12;

/// Rounds to `digits` significant digits so JSON output is stable across runs.
inline double round_sig(double v, int digits = kDefaultDigits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return std::stod(os.str());
}

inline std::string format_number(double v, int digits = kDefaultDigits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

/// "p/q" when v is within 1e-12 of a fraction with q <= max_den, else empty.
inline std::string rational_string(double v, long max_den = 1000) {
  if (!std::isfinite(v)) return {};
  // Continued-fraction convergents h/k.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = v;
  for (int i = 0; i < 40; ++i) {
    const double a = std::floor(x);
    if (std::abs(a) > 1e12) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - v) <= 1e-12)
      return k1 == 1 ? std::to_string(h1) : std::to_string(h1) + "/" + std::to_string(k1);
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return {};
}

/// JSON has no NaN or infinity; those become null.
inline json number(double v, int digits = kDefaultDigits) {
  if (!std::isfinite(v)) return nullptr;
  if (v == 0.0) return 0.0;  // no "-0.0"
  return round_sig(v, digits);
}

inline json to_json(const SystemParams& p, int digits = kDefaultDigits) {
  json j = {{"kappa", number(p.kappa, digits)}, {"c", number(p.c, digits)},           {"gamma", number(p.gamma, digits)},
          {"gamma_dual", number(p.gamma_dual, digits)}, {"g", number(p.g, digits)}, {"b", number(p.b, digits)},
          {"phase", std::string(to_string(p.phase))}};
  if (p.space_filling()) j["space_filling"] = true;  // algebra holds, geometric readings do not
  return j;
}

inline json to_json(const ExponentSet& e, int digits = kDefaultDigits) {
  return {{"qg_boundary", number(e.qg_boundary, digits)},
          {"halfplane_dim", number(e.halfplane_dim, digits)},
          {"plane_weight", number(e.plane_weight, digits)},
          {"plane_scaling", number(e.plane_scaling, digits)},
          {"qg_bulk", number(e.qg_bulk, digits)},
          {"channel", e.channel == Channel::Dual ? "dual" : "standard"},
          {"channel_kappa", number(e.channel_kappa, digits)},
          {"context", e.context == Context::Bulk ? "bulk" : "boundary"}};
}

inline json to_json(const mc::FitResult& f, int digits = kDefaultDigits) {
  return {{"exponent", number(f.exponent, digits)},
          {"stderr", number(f.std_error, digits)},
          {"window", {number(f.window.lo, digits), number(f.window.hi, digits)}},
          {"samples", f.samples},
          {"seed", f.seed}};
}

inline json to_json(const SpectrumTable& t, int digits = kDefaultDigits) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"n", number(r.n, digits)},
                    {"tau", number(r.tau, digits)},
                    {"D", number(r.D, digits)},
                    {"alpha", number(r.alpha, digits)},
                    {"f", number(r.f, digits)},
                    {"flagged", r.flagged}});
  json out = {{"kind", std::string(to_string(t.kind))}, {"params", to_json(t.params, digits)}, {"rows", rows}};
  if (t.kind == SpectrumKind::Mixed) out["lambda"] = number(t.lambda, digits);
  if (t.kind == SpectrumKind::DoubleSided) out["alpha_prime"] = number(t.alpha_prime, digits);
  return out;
}

inline void write_csv(std::ostream& os, const SpectrumTable& t, int digits = kDefaultDigits) {
  os << "n,tau,D,alpha,f,flagged\n";
  for (const auto& r : t.rows)
    os << format_number(r.n, digits) << ',' << format_number(r.tau, digits) << ',' << format_number(r.D, digits) << ','
       << format_number(r.alpha, digits) << ',' << format_number(r.f, digits) << ',' << (r.flagged ? 1 : 0) << '\n';
}

/// Generic CSV: header row, then one row per index across equal-length columns.
inline void write_columns(std::ostream& os, const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& columns, int digits = kDefaultDigits) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format_number(columns[c][r], digits);
    os << '\n';
  }
}

/// Two-column whitespace-separated data file for plotting.
inline void write_dat(std::ostream& os, const std::vector<double>& x, const std::vector<double>& y,
                      int digits = kDefaultDigits) {
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    os << format_number(x[i], digits) << ' ' << format_number(y[i], digits) << '\n';
}

}  // namespace kpz::io
