#pragma once

// Multifractal spectra of the harmonic measure near a conformally invariant
// frontier of central charge c: one-sided f(alpha), wedge form, probability
// density, mixed rotation spectrum f(alpha, lambda), double-sided f2, tip
// spectrum, plus a numeric Legendre-transform oracle used to cross-check them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string_view>
#include <vector>

#include "kpz/errors.hpp"
#include "kpz/params.hpp"

namespace kpz {

namespace detail {

inline double standard_gamma(const SystemParams& p) { return gamma_from_c(p.c, GammaBranch::Standard); }

/// sqrt((24n + 1 - c)/(25 - c)); zero at n = n*.
inline double reduced_root(double n, double c) {
  const double rad = (24.0 * n + 1.0 - c) / (25.0 - c);
  if (rad < -1e-15) throw DomainError("moment order below n* = -(1-c)/24");
  return std::sqrt(std::max(0.0, rad));
}

}  // namespace detail

/// Lowest admissible moment order.
inline double n_star(const SystemParams& p) { return -(1.0 - p.c) / 24.0; }

inline double tau(double n, const SystemParams& p) {
  const double r = detail::reduced_root(n, p.c);
  return (n - 1.0) / 2.0 + ((25.0 - p.c) / 24.0) * (r - 1.0);
}

/// Generalized dimension tau(n)/(n-1); written as 1/2 + 1/(1+r), which is
/// regular at n = 1 where D = 1.
inline double D(double n, const SystemParams& p) { return 0.5 + 1.0 / (1.0 + detail::reduced_root(n, p.c)); }

inline double alpha_of_n(double n, const SystemParams& p) {
  const double r = detail::reduced_root(n, p.c);
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 + 0.5 / r;
}

inline double f_of_alpha(double alpha, const SystemParams& p) {
  if (!(alpha > 0.5)) throw DomainError("f_of_alpha: alpha > 1/2");
  if (std::isinf(alpha)) return (25.0 - p.c) / 16.0 - ((1.0 - p.c) > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  return ((25.0 - p.c) / 48.0) * (3.0 - 1.0 / (2.0 * alpha - 1.0)) - ((1.0 - p.c) / 24.0) * alpha;
}

// ---------------------------------------------------------------------------
// External perimeter
// ---------------------------------------------------------------------------

inline double d_ep(const SystemParams& p) {
  const double a = std::sqrt(1.0 - p.c);
  return 1.5 - a * (std::sqrt(25.0 - p.c) - a) / 24.0;
}

/// Typical singularity exponent; infinite at c = 1.
inline double alpha_hat(const SystemParams& p) {
  const double denom = 3.0 - 2.0 * d_ep(p);
  return denom > 0.0 ? 1.0 / denom : std::numeric_limits<double>::infinity();
}

inline double theta_hat(const SystemParams& p) { return std::numbers::pi * (3.0 - 2.0 * d_ep(p)); }

// ---------------------------------------------------------------------------
// Wedges and probability density
// ---------------------------------------------------------------------------

inline double wedge_spectrum(double theta, const SystemParams& p) {
  constexpr double pi = std::numbers::pi;
  if (!(theta > 0.0 && theta <= 2.0 * pi)) throw DomainError("wedge_spectrum: theta in (0, 2 pi]");
  if (theta == 2.0 * pi) return -std::numeric_limits<double>::infinity();
  const double d = pi - theta;
  return pi / theta - ((25.0 - p.c) / 12.0) * d * d / (theta * (2.0 * pi - theta));
}

/// Unnormalized density of singularity exponents at scale ln R.
inline double p_alpha_density(double alpha, double lnR, const SystemParams& p) {
  if (!(alpha > 0.5)) throw DomainError("p_alpha_density: alpha > 1/2");
  if (!(lnR > 0.0)) throw DomainError("p_alpha_density: ln R > 0");
  const double w = alpha - 0.5;
  const double s = std::sqrt(1.0 - p.c) * std::sqrt(w) - std::sqrt(25.0 - p.c) / (2.0 * std::sqrt(w));
  return std::exp(-(lnR / 24.0) * s * s);
}

// ---------------------------------------------------------------------------
// Mixed rotation spectrum
// ---------------------------------------------------------------------------

inline double mixed_spectrum(double alpha, double lambda, const SystemParams& p) {
  const double l2 = lambda * lambda;
  const double bound = 0.5 * (1.0 + l2);
  if (alpha < bound) throw DomainError("mixed_spectrum: alpha below the Beurling bound (1+lambda^2)/2");
  if (alpha == bound) return -std::numeric_limits<double>::infinity();
  return alpha + p.b - p.b * alpha * alpha / (2.0 * alpha - 1.0 - l2);
}

inline double tau_np(double n, double pp, const SystemParams& p) {
  const double t = tau(n, p);
  return t - 0.25 * pp * pp / (t + p.b);
}

inline double d_ep_lambda(double lambda, const SystemParams& p) {
  const double l2 = lambda * lambda;
  return (1.0 + l2) * d_ep(p) - p.b * l2;
}

// ---------------------------------------------------------------------------
// Double-sided and tip spectra
// ---------------------------------------------------------------------------

/// Scaling dimension of the two-sided harmonic moments (n on one side, n' on the other).
inline double x2(double n, double n_prime, const SystemParams& p) {
  const double g = detail::standard_gamma(p);
  return 2.0 * kpz_V(g, 1.0 - g + kpz_U_inv(g, n) + kpz_U_inv(g, n_prime));
}

inline double tau2(double n, double n_prime, const SystemParams& p) { return x2(n, n_prime, p) - 2.0; }

inline double double_sided(double alpha, double alpha_prime, const SystemParams& p) {
  if (!(alpha > 0.0 && alpha_prime > 0.0)) throw DomainError("double_sided: alpha, alpha' > 0");
  const double dom = 1.0 - 0.5 * (1.0 / alpha + 1.0 / alpha_prime);
  if (dom < 0.0) throw DomainError("double_sided: outside 1 - (1/alpha + 1/alpha')/2 >= 0");
  if (dom == 0.0) return -std::numeric_limits<double>::infinity();
  const double g = detail::standard_gamma(p);
  return (25.0 - p.c) / 12.0 - 1.0 / (2.0 * (1.0 - g) * dom) - ((1.0 - p.c) / 24.0) * (alpha + alpha_prime);
}

inline double double_sided_mixed(double alpha, double alpha_prime, double lambda, const SystemParams& p) {
  if (!(alpha > 0.0 && alpha_prime > 0.0)) throw DomainError("double_sided_mixed: alpha, alpha' > 0");
  const double dom = 1.0 / (1.0 + lambda * lambda) - 0.5 / alpha - 0.5 / alpha_prime;
  if (!(dom > 0.0)) throw DomainError("double_sided_mixed: outside 1/(1+lambda^2) - 1/2alpha - 1/2alpha' > 0");
  const double g = detail::standard_gamma(p);
  return p.b - 1.0 / (2.0 * (1.0 - g) * dom) - 0.5 * (p.b - 2.0) * (alpha + alpha_prime);
}

/// Moments at the tip of a simple path: one path extremity instead of two.
inline double tau_tip(double n, const SystemParams& p) {
  const double g = detail::standard_gamma(p);
  return 2.0 * kpz_V(g, 0.5 * (1.0 - g) + kpz_U_inv(g, n)) - 2.0;
}

inline double tip_spectrum(double alpha, const SystemParams& p) {
  if (!(alpha > 0.5)) throw DomainError("tip_spectrum: alpha > 1/2");
  const double g = detail::standard_gamma(p);
  return (25.0 - p.c) / 12.0 - 1.0 / (8.0 * (1.0 - g) * (1.0 - 0.5 / alpha)) - ((1.0 - p.c) / 24.0) * alpha;
}

/// Random-walk double spectrum at c = 0 (a_B = 3/2).
inline double brownian_double_sided(double alpha, double alpha_prime) {
  const double dom = 1.0 - 0.5 * (1.0 / alpha + 1.0 / alpha_prime);
  if (!(dom > 0.0)) throw DomainError("brownian_double_sided: outside domain");
  constexpr double a = 1.5;
  return 25.0 / 12.0 - (a * a / 3.0) / dom - (alpha + alpha_prime) / 24.0;
}

/// Cut-point spectrum of the Brownian frontier, sup over alpha' of the above.
inline double brownian_one_sided(double alpha) {
  if (!(alpha > 0.5)) throw DomainError("brownian_one_sided: alpha > 1/2");
  return 51.0 / 48.0 - (49.0 / 48.0) / (2.0 * alpha - 1.0) - alpha / 24.0;
}

// ---------------------------------------------------------------------------
// Spectrum tables
// ---------------------------------------------------------------------------

enum class SpectrumKind { Harmonic, Mixed, DoubleSided, Tip };

inline constexpr std::string_view to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::Harmonic: return "harmonic";
    case SpectrumKind::Mixed: return "mixed";
    case SpectrumKind::DoubleSided: return "double";
    case SpectrumKind::Tip: return "tip";
  }
  return "";
}

struct SpectrumRow {
  double n = 0.0;
  double tau = 0.0;
  double D = 0.0;  // tau/(n-1); NaN where undefined
  double alpha = 0.0;
  double f = 0.0;
  bool flagged = false;  // oracle only: local non-concavity
};

/// Rows are one-parameter Legendre pairs: tau is the moment exponent at fixed
/// lambda (Mixed) or fixed alpha' (DoubleSided), so tau + f = alpha n always.
struct SpectrumTable {
  SystemParams params;
  SpectrumKind kind = SpectrumKind::Harmonic;
  double lambda = 0.0;       // Mixed
  double alpha_prime = 0.0;  // DoubleSided
  std::vector<SpectrumRow> rows;
};

/// Log-spaced in n - n* from n* + offset to n_max.
inline std::vector<double> default_n_grid(const SystemParams& p, std::size_t points = 200, double n_max = 1e3,
                                          double offset = 1e-6) {
  if (points < 2) throw DomainError("default_n_grid: need at least two points");
  const double ns = n_star(p);
  if (!(n_max - ns > offset)) throw DomainError("default_n_grid: n_max must exceed n* + offset");
  const double lo = std::log(offset), hi = std::log(n_max - ns);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = ns + std::exp(lo + t * (hi - lo));
  }
  grid.back() = n_max;
  return grid;
}

namespace detail {

inline double generalized_dimension(double t, double n) {
  return std::abs(n - 1.0) < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : t / (n - 1.0);
}

/// Row of the double-sided spectrum at moment n with the other side held at alpha'.
inline SpectrumRow double_sided_row(double n, double alpha_prime, const SystemParams& p) {
  const double g = standard_gamma(p);
  const double u = kpz_U_inv(g, n);
  const double a = 1.0 - g + u;
  const double u2 = (a + alpha_prime * g) / (2.0 * alpha_prime - 1.0);
  const double n2 = kpz_U(g, u2);
  const double t2 = 2.0 * kpz_V(g, a + u2) - 2.0;
  SpectrumRow r;
  r.n = n;
  r.alpha = (a + u2) / (2.0 * u - g);
  r.tau = t2 - alpha_prime * n2;
  r.f = double_sided(r.alpha, alpha_prime, p);
  r.D = generalized_dimension(r.tau, n);
  return r;
}

}  // namespace detail

/// Closed-form spectrum table. lambda is used by Mixed, alpha_prime by DoubleSided.
inline SpectrumTable spectrum_table(SpectrumKind kind, const SystemParams& p, const std::vector<double>& n_grid,
                                    double lambda = 0.0, double alpha_prime = 3.0) {
  SpectrumTable table;
  table.params = p;
  table.kind = kind;
  table.lambda = lambda;
  table.alpha_prime = alpha_prime;
  if (kind == SpectrumKind::DoubleSided && !(alpha_prime > 0.5))
    throw DomainError("double-sided table: alpha' > 1/2");

  std::vector<double> grid = n_grid;
  std::sort(grid.begin(), grid.end());
  const double l2 = lambda * lambda;
  for (double n : grid) {
    SpectrumRow r;
    r.n = n;
    switch (kind) {
      case SpectrumKind::Harmonic:
        r.tau = tau(n, p);
        r.D = D(n, p);
        r.alpha = alpha_of_n(n, p);
        r.f = f_of_alpha(r.alpha, p);
        break;
      case SpectrumKind::Mixed:
        r.tau = (1.0 + l2) * tau(n, p) + p.b * l2;
        r.alpha = (1.0 + l2) * alpha_of_n(n, p);
        r.f = mixed_spectrum(r.alpha, lambda, p);
        r.D = detail::generalized_dimension(r.tau, n);
        break;
      case SpectrumKind::DoubleSided:
        r = detail::double_sided_row(n, alpha_prime, p);
        break;
      case SpectrumKind::Tip: {
        const double g = detail::standard_gamma(p);
        const double u = kpz_U_inv(g, n);
        r.tau = tau_tip(n, p);
        r.alpha = (0.5 * (1.0 - g) + u) / (2.0 * u - g);
        r.f = tip_spectrum(r.alpha, p);
        r.D = detail::generalized_dimension(r.tau, n);
        break;
      }
    }
    table.rows.push_back(r);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Numeric Legendre oracle
// ---------------------------------------------------------------------------

/// Central-difference step: 1e-5 max(1, |n|) (roundoff in tau grows with n and
/// is multiplied by n again in f), shrunk near the lower edge of the domain so
/// that n - h stays admissible and the truncation error stays relative.
inline double oracle_step(double n, double n_min) {
  return std::min(1e-5 * std::max(1.0, std::abs(n)), 1e-4 * (n - n_min));
}

/// alpha = tau'(n) by central differences, f = alpha n - tau. Rows where the
/// second difference is positive, or alpha fails to decrease, are flagged.
inline SpectrumTable legendre_oracle(const std::function<double(double)>& tau_fn, const std::vector<double>& n_grid,
                                     const SystemParams& p, double n_min) {
  SpectrumTable table;
  table.params = p;
  std::vector<double> grid = n_grid;
  std::sort(grid.begin(), grid.end());
  for (double n : grid) {
    if (!(n > n_min)) throw DomainError("legendre_oracle: grid point at or below the domain edge");
    const double h = oracle_step(n, n_min);
    const double tp = tau_fn(n + h), t0 = tau_fn(n), tm = tau_fn(n - h);
    SpectrumRow r;
    r.n = n;
    r.tau = t0;
    r.alpha = (tp - tm) / (2.0 * h);
    r.f = r.alpha * n - t0;
    r.D = detail::generalized_dimension(t0, n);
    const double second = tp - 2.0 * t0 + tm;
    r.flagged = second > 1e-12 * std::max(1.0, std::abs(t0));
    if (!table.rows.empty() && !(r.alpha < table.rows.back().alpha)) r.flagged = true;
    table.rows.push_back(r);
  }
  return table;
}

struct LegendrePoint2 {
  double n = 0.0, m = 0.0;
  double alpha = 0.0;  // d tau / dn
  double beta = 0.0;   // d tau / dm (lambda for rotation moments, alpha' for two-sided moments)
  double f = 0.0;      // alpha n + beta m - tau
};

/// Two-variable Legendre transform by central differences.
inline LegendrePoint2 legendre_oracle_2d(const std::function<double(double, double)>& tau_fn, double n, double m,
                                         double h = 1e-5) {
  LegendrePoint2 pt;
  pt.n = n;
  pt.m = m;
  pt.alpha = (tau_fn(n + h, m) - tau_fn(n - h, m)) / (2.0 * h);
  pt.beta = (tau_fn(n, m + h) - tau_fn(n, m - h)) / (2.0 * h);
  pt.f = pt.alpha * n + pt.beta * m - tau_fn(n, m);
  return pt;
}

/// Largest relative deviation |a - b| / max(1, |b|) between oracle and closed-form rows.
inline double max_legendre_deviation(const SpectrumTable& oracle, const SpectrumTable& exact) {
  double worst = 0.0;
  const std::size_t count = std::min(oracle.rows.size(), exact.rows.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto& o = oracle.rows[i];
    const auto& e = exact.rows[i];
    worst = std::max(worst, std::abs(o.alpha - e.alpha) / std::max(1.0, std::abs(e.alpha)));
    worst = std::max(worst, std::abs(o.f - e.f) / std::max(1.0, std::abs(e.f)));
  }
  return worst;
}

/// The moment-exponent function whose Legendre transform is the table's f column.
inline std::function<double(double)> table_tau_function(const SpectrumTable& t) {
  const SystemParams p = t.params;
  switch (t.kind) {
    case SpectrumKind::Harmonic: return [p](double n) { return tau(n, p); };
    case SpectrumKind::Mixed: {
      const double l2 = t.lambda * t.lambda;
      return [p, l2](double n) { return (1.0 + l2) * tau(n, p) + p.b * l2; };
    }
    case SpectrumKind::DoubleSided: {
      const double ap = t.alpha_prime;
      return [p, ap](double n) { return detail::double_sided_row(n, ap, p).tau; };
    }
    case SpectrumKind::Tip: return [p](double n) { return tau_tip(n, p); };
  }
  return {};
}

/// Re-derives a closed-form table numerically and reports the worst deviation.
inline double check_legendre(const SpectrumTable& exact) {
  std::vector<double> grid;
  grid.reserve(exact.rows.size());
  for (const auto& r : exact.rows) grid.push_back(r.n);
  const SpectrumTable numeric = legendre_oracle(table_tau_function(exact), grid, exact.params, n_star(exact.params));
  return max_legendre_deviation(numeric, exact);
}

}  // namespace kpz
