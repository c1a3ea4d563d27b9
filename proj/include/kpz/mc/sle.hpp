#pragma once

// Chordal SLE traces by the zipper: piecewise-constant driving, each capacity
// step dt absorbed by the vertical slit map
//   G(z) = xi + sqrt((z - xi)^2 + 4 dt),
// whose inverse sends xi to the slit tip xi + 2i sqrt(dt). The k-th trace
// point is G_1^-1 o ... o G_{k-1}^-1 (xi_k + 2i sqrt(dt)), an O(N^2) build.
// Radial traces (disk, aimed at 0) use the analogous radial slit maps and
// serve the winding estimator, which needs a path extremity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <unordered_set>
#include <vector>

#include "kpz/errors.hpp"
#include "kpz/mc/fit.hpp"
#include "kpz/mc/parallel.hpp"
#include "kpz/mc/rng.hpp"

namespace kpz::mc {

using cplx = std::complex<double>;

enum class SleGeometry { Chordal, Radial };

struct SleTrace {
  SleGeometry geometry = SleGeometry::Chordal;
  double kappa = 0.0;
  double dt = 0.0;               // base capacity step
  std::vector<double> driving;   // xi_k, cumulative, one per map
  std::vector<double> map_dt;    // capacity of each map
  std::vector<cplx> points;     // z_k, one per slit map; z_0 = 0 (chordal) or 1 (radial)
  std::uint64_t perturbations = 0;
};

namespace detail {

inline constexpr double kSlitPerturb = 1e-9;

/// Inverse slit map with the upper-half-plane branch.
inline cplx slit_inverse(cplx w, double xi, double dt, std::uint64_t& perturbations) {
  cplx u = (w - xi) * (w - xi) - 4.0 * dt;
  if (std::abs(u) < 1e-300 || (u.imag() == 0.0 && u.real() < 0.0 && w.imag() == 0.0)) {
    w += cplx(0.0, kSlitPerturb * (1.0 + std::abs(w)));
    u = (w - xi) * (w - xi) - 4.0 * dt;
    ++perturbations;
  }
  cplx s = std::sqrt(u);
  if (s.imag() < 0.0 || (s.imag() == 0.0 && (s.real() < 0.0) != ((w - xi).real() < 0.0))) s = -s;
  return xi + s;
}

/// Forward slit map, branch continuous with the identity at infinity.
inline cplx slit_forward(cplx z, double xi, double dt) {
  cplx s = std::sqrt((z - xi) * (z - xi) + 4.0 * dt);
  if (s.imag() < 0.0 || (s.imag() == 0.0 && (s.real() < 0.0) != ((z - xi).real() < 0.0))) s = -s;
  return xi + s;
}

inline cplx chordal_point(const SleTrace& tr, double xi, double h, std::uint64_t& perturbations) {
  cplx z(xi, 2.0 * std::sqrt(h));
  for (std::size_t j = tr.driving.size(); j-- > 0;) z = slit_inverse(z, tr.driving[j], tr.map_dt[j], perturbations);
  return z;
}

}  // namespace detail

/// Trace from a given driving sequence xi_1..xi_N (xi_0 = 0 implied).
inline SleTrace sle_trace_from_driving(double kappa, const std::vector<double>& driving, double dt) {
  if (!(dt > 0.0)) throw DomainError("sle_trace: dt > 0");
  SleTrace tr;
  tr.kappa = kappa;
  tr.dt = dt;
  tr.points.reserve(driving.size() + 1);
  tr.points.emplace_back(0.0, 0.0);
  for (double xi : driving) {
    const cplx z = detail::chordal_point(tr, xi, dt, tr.perturbations);
    tr.driving.push_back(xi);
    tr.map_dt.push_back(dt);
    tr.points.push_back(z);
  }
  return tr;
}

/// Driving increments ~ Normal(0, kappa dt) from stream `trial` of `seed`.
inline SleTrace sle_trace(double kappa, std::size_t steps, double dt, std::uint64_t seed, std::uint64_t trial = 0) {
  if (!(kappa >= 0.0)) throw DomainError("sle_trace: kappa >= 0");
  if (steps < 1) throw DomainError("sle_trace: steps >= 1");
  PhiloxStream rng(seed, trial);
  std::vector<double> xi(steps);
  const double sd = std::sqrt(kappa * dt);
  double w = 0.0;
  for (auto& x : xi) {
    w += sd * rng.normal();
    x = w;
  }
  return sle_trace_from_driving(kappa, xi, dt);
}

/// g_{t_k}(z_k): should return the driving value xi_k at the point's birth.
inline cplx forward_flow(const SleTrace& tr, std::size_t k) {
  if (k == 0 || k >= tr.points.size()) throw DomainError("forward_flow: 1 <= k < points");
  cplx z = tr.points[k];
  for (std::size_t j = 0; j < k; ++j) z = detail::slit_forward(z, tr.driving[j], tr.map_dt[j]);
  return z;
}

/// True if two non-adjacent trace segments cross.
inline bool has_self_crossing(const SleTrace& tr) {
  const auto& p = tr.points;
  auto orient = [](cplx a, cplx b, cplx c) { return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real()); };
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    for (std::size_t j = i + 2; j + 1 < p.size(); ++j) {
      const double d1 = orient(p[i], p[i + 1], p[j]), d2 = orient(p[i], p[i + 1], p[j + 1]);
      const double d3 = orient(p[j], p[j + 1], p[i]), d4 = orient(p[j], p[j + 1], p[i + 1]);
      if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    }
  return false;
}

struct SleEnsemble {
  double kappa = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<SleTrace> traces;
};

inline SleEnsemble sle_ensemble(double kappa, std::size_t traces, std::size_t steps, double dt, std::uint64_t seed,
                                unsigned threads = 1) {
  SleEnsemble ens{kappa, steps, dt, seed, std::vector<SleTrace>(traces)};
  parallel_trials(traces, threads, [&](std::size_t i, unsigned) { ens.traces[i] = sle_trace(kappa, steps, dt, seed, i); });
  return ens;
}

// ---------------------------------------------------------------------------
// Radial traces
// ---------------------------------------------------------------------------

// Radial Loewner chain in the unit disk aimed at 0, g_t'(0) = e^t. The
// elementary map removes a radial slit [r, 1] and sends its tip to 1:
//   s = (1+z)/(1-z), t = s^2, u = t/(a^2 - t), v = sqrt(u), w = (v - v0)/(v + v0)
// with a = (1+r)/(1-r), v0 = 1/sqrt(a^2 - 1), and g'(0) = a^2/(a^2 - 1) = e^dt.

namespace detail {

struct RadialSlit {
  double a2 = 0.0;  // a^2
  double v0 = 0.0;
  double tip = 0.0;  // r
  explicit RadialSlit(double dt) {
    a2 = std::exp(dt) / std::expm1(dt);
    v0 = 1.0 / std::sqrt(a2 - 1.0);
    const double a = std::sqrt(a2);
    tip = (a - 1.0) / (a + 1.0);
  }
  /// Inverse of the slit map based at 1.
  cplx inverse(cplx w) const {
    const cplx v = v0 * (1.0 + w) / (1.0 - w);
    const cplx u = v * v;
    const cplx t = a2 * u / (1.0 + u);
    const cplx s = std::sqrt(t);
    return (s - 1.0) / (s + 1.0);
  }
  cplx forward(cplx z) const {
    const cplx s = (1.0 + z) / (1.0 - z);
    const cplx t = s * s;
    if (std::abs(a2 - t) < 1e-300) return 1.0;  // the tip itself
    const cplx v = std::sqrt(t / (a2 - t));
    return (v - v0) / (v + v0);
  }
};

}  // namespace detail

/// Radial SLE toward 0: driving e^{i W}, W_k ~ Brownian with variance kappa t,
/// total capacity `capacity` split into `steps` equal maps. z_0 = 1.
inline SleTrace sle_radial_trace(double kappa, std::size_t steps, double capacity, std::uint64_t seed,
                                 std::uint64_t trial = 0) {
  if (!(kappa >= 0.0)) throw DomainError("sle_radial_trace: kappa >= 0");
  if (steps < 1 || !(capacity > 0.0)) throw DomainError("sle_radial_trace: steps >= 1, capacity > 0");
  const double dt = capacity / static_cast<double>(steps);
  const detail::RadialSlit slit(dt);
  PhiloxStream rng(seed, trial);
  SleTrace tr;
  tr.geometry = SleGeometry::Radial;
  tr.kappa = kappa;
  tr.dt = dt;
  tr.driving.resize(steps);
  const double sd = std::sqrt(kappa * dt);
  double w = 0.0;
  for (auto& x : tr.driving) {
    w += sd * rng.normal();
    x = w;
  }
  tr.map_dt.assign(steps, dt);
  std::vector<cplx> rot(steps);
  for (std::size_t k = 0; k < steps; ++k) rot[k] = std::polar(1.0, tr.driving[k]);
  tr.points.reserve(steps + 1);
  tr.points.emplace_back(1.0, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    cplx z = rot[k] * slit.tip;
    for (std::size_t j = k; j-- > 0;) z = rot[j] * slit.inverse(z / rot[j]);
    tr.points.push_back(z);
  }
  return tr;
}

/// Radial forward flow g_{t_k}(z_k); should equal e^{i W_k}.
inline cplx radial_forward_flow(const SleTrace& tr, std::size_t k) {
  if (k == 0 || k >= tr.points.size()) throw DomainError("radial_forward_flow: 1 <= k < points");
  const detail::RadialSlit slit(tr.dt);
  cplx z = tr.points[k];
  for (std::size_t j = 0; j < k; ++j) {
    const cplx r = std::polar(1.0, tr.driving[j]);
    z = r * slit.forward(z / r);
  }
  return z;
}

inline std::vector<SleTrace> sle_radial_ensemble(double kappa, std::size_t traces, std::size_t steps, double capacity,
                                                 std::uint64_t seed, unsigned threads = 1) {
  std::vector<SleTrace> out(traces);
  parallel_trials(traces, threads, [&](std::size_t i, unsigned) { out[i] = sle_radial_trace(kappa, steps, capacity, seed, i); });
  return out;
}

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

struct ScaleSeries {
  std::vector<double> scales;
  std::vector<double> values;
  FitResult fit;
};

/// Winding about the extremity of radial traces (target 0): the unrolled
/// arg z_j at the first entry into |z| <= d. Var[theta] is regressed on
/// ln(1/d); the slope estimates kappa. Distances run from 1/4 down to
/// 16 times the median final distance to the target, in quarter octaves.
inline ScaleSeries sle_winding_variance(const std::vector<SleTrace>& traces, std::vector<double> distances = {}) {
  if (traces.size() < 2) throw StatisticsError("sle_winding_variance: need at least two traces");
  for (const auto& tr : traces)
    if (tr.geometry != SleGeometry::Radial || tr.points.size() < 3)
      throw DomainError("sle_winding_variance: needs radial traces (winding about the extremity)");
  if (distances.empty()) {
    std::vector<double> ends;
    for (const auto& tr : traces) ends.push_back(std::abs(tr.points.back()));
    std::nth_element(ends.begin(), ends.begin() + static_cast<std::ptrdiff_t>(ends.size() / 2), ends.end());
    const double lo = 16.0 * ends[ends.size() / 2];
    for (double d = 0.25; d >= lo; d *= std::pow(2.0, -0.25)) distances.push_back(d);
  }
  std::sort(distances.begin(), distances.end(), std::greater<>());
  if (distances.size() < 2 || distances.front() / distances.back() < 8.0)
    throw StatisticsError("insufficient range: fewer than 3 octaves of distance");

  std::vector<double> sum(distances.size(), 0.0), sum2(distances.size(), 0.0);
  std::vector<std::size_t> count(distances.size(), 0);
  for (const auto& tr : traces) {
    double theta = 0.0, prev = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 1; j < tr.points.size() && k < distances.size(); ++j) {
      const double a = std::arg(tr.points[j]);
      if (j == 1) {
        theta = a;
      } else {
        double da = a - prev;
        da -= 2.0 * std::numbers::pi * std::round(da / (2.0 * std::numbers::pi));
        theta += da;
      }
      prev = a;
      while (k < distances.size() && std::abs(tr.points[j]) <= distances[k]) {
        sum[k] += theta;
        sum2[k] += theta * theta;
        ++count[k];
        ++k;
      }
    }
  }
  ScaleSeries out;
  std::vector<double> lx;
  for (std::size_t k = 0; k < distances.size(); ++k) {
    if (count[k] < 2) continue;
    const double n = static_cast<double>(count[k]);
    out.scales.push_back(distances[k]);
    out.values.push_back((sum2[k] - sum[k] * sum[k] / n) / (n - 1.0));
    lx.push_back(-std::log(distances[k]));
  }
  if (out.scales.size() < 5) throw StatisticsError("insufficient range: too few populated distances");
  const LinearFit lf = linear_fit(lx, out.values);
  out.fit.exponent = lf.slope;
  out.fit.std_error = std::max(lf.slope_error, std::numeric_limits<double>::epsilon());
  out.fit.intercept = lf.intercept;
  out.fit.window = {out.scales.back(), out.scales.front()};
  out.fit.samples = out.scales.size();
  return out;
}

/// Box counting by growth: boxes of fixed size eps (segments interpolated
/// below eps) covering the trace up to capacity time t, against the capacity
/// radius sqrt(t). By scale invariance <N> ~ (sqrt(t)/eps)^D; whatever the
/// discretization loses at scale eps is the same fraction at every t, so it
/// drops out of the slope. Checkpoints are quarter-octave spaced in sqrt(t)
/// from 16 base steps on.
inline ScaleSeries sle_dimension(const std::vector<SleTrace>& traces, double eps = 0.0) {
  if (traces.empty()) throw StatisticsError("sle_dimension: no traces");
  const double dt = traces.front().dt;
  double total = std::numeric_limits<double>::infinity();
  for (const auto& tr : traces) {
    if (tr.dt != dt || tr.geometry != SleGeometry::Chordal)
      throw DomainError("sle_dimension: needs chordal traces with a common base step");
    double cap = 0.0;
    for (double h : tr.map_dt) cap += h;
    total = std::min(total, cap);
  }
  if (!(eps > 0.0)) eps = 2.0 * std::sqrt(dt);
  std::vector<double> checkpoints;  // capacities
  for (int k = 32;; k += 2) {
    const double c = dt * std::pow(2.0, 0.125 * k);
    if (c > total * (1.0 + 1e-9)) break;
    checkpoints.push_back(c);
  }
  if (checkpoints.size() < 12) throw StatisticsError("insufficient range: fewer than 3 octaves of trace growth");

  ScaleSeries out;
  out.values.assign(checkpoints.size(), 0.0);
  for (double c : checkpoints) out.scales.push_back(std::sqrt(c));
  std::unordered_set<std::uint64_t> boxes;
  for (const auto& tr : traces) {
    const auto& p = tr.points;
    boxes.clear();
    auto mark = [&](cplx z) {
      const auto bx = static_cast<std::int64_t>(std::floor(z.real() / eps));
      const auto by = static_cast<std::int64_t>(std::floor(z.imag() / eps));
      boxes.insert((static_cast<std::uint64_t>(bx) << 32) ^ static_cast<std::uint32_t>(by));
    };
    mark(p.front());
    std::size_t k = 0;
    double cap = 0.0;
    for (std::size_t i = 0; i + 1 < p.size() && k < checkpoints.size(); ++i) {
      const double len = std::abs(p[i + 1] - p[i]);
      const auto sub = static_cast<std::size_t>(std::ceil(2.0 * len / eps));
      for (std::size_t s = 1; s <= sub; ++s)
        mark(p[i] + (p[i + 1] - p[i]) * (static_cast<double>(s) / static_cast<double>(sub)));
      cap += tr.map_dt[i];
      while (k < checkpoints.size() && cap >= checkpoints[k] * (1.0 - 1e-9)) {
        out.values[k] += static_cast<double>(boxes.size()) / static_cast<double>(traces.size());
        ++k;
      }
    }
  }
  out.fit = fit_power_law(out.scales, out.values, FitWindow{out.scales.front(), out.scales.back()});
  return out;
}

}  // namespace kpz::mc
