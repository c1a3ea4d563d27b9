#pragma once

// Closed-form exponent families: Brownian intersection and disconnection,
// SAW watermelons, percolation crossings and harmonic moments, Hausdorff
// dimensions of hull subsets, multiple and dressed SLE stars, contact
// exponents, SLE(kappa, rho), and winding of k-strand stars.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

#include "kpz/errors.hpp"
#include "kpz/params.hpp"

namespace kpz {

namespace detail {
// Standard c = 0 maps (gamma = -1/2) used by the Brownian, SAW and percolation families.
inline constexpr double kGammaZero = -0.5;
}  // namespace detail

struct ZetaPackets {
  double zeta = 0.0;            // intersection exponent in the plane
  double two_zeta_tilde = 0.0;  // half-plane dimension
};

/// L mutually-avoiding packets of n_l transparent Brownian paths.
inline ZetaPackets zeta_packets(std::span<const double> ns) {
  if (ns.empty()) throw DomainError("zeta_packets: need at least one packet");
  double x = 0.0;
  for (double n : ns) {
    if (!(n > 0.0)) throw DomainError("zeta_packets: packet sizes must be positive");
    x += (std::sqrt(24.0 * n + 1.0) - 1.0) / 4.0;
  }
  return {(4.0 * x * x - 1.0) / 24.0, x * (1.0 + 2.0 * x) / 3.0};
}

inline ZetaPackets zeta_packets(std::initializer_list<double> ns) {
  return zeta_packets(std::span<const double>(ns.begin(), ns.size()));
}

/// Non-intersection exponent of L Brownian paths, L real (L = 3/2 gives the frontier).
inline double zeta_brownian(double L) {
  if (!(L > 0.0)) throw DomainError("zeta_brownian: L > 0");
  return (4.0 * L * L - 1.0) / 24.0;
}

/// Planar Brownian disconnection exponent.
inline double disconnection_brownian() { return 1.0 / 8.0; }

struct Watermelon {
  double x = 0.0;
  double x_tilde = 0.0;
};

inline Watermelon saw_watermelon(int L) {
  if (L < 1) throw DomainError("saw_watermelon: L >= 1");
  const double l = L;
  return {(2.25 * l * l - 1.0) / 12.0, (l / 4.0) * (1.0 + 1.5 * l)};
}

/// l percolation crossing paths (polychromatic in the bulk, any colors on the boundary).
inline Watermelon perc_crossing(int l) {
  if (l < 1) throw DomainError("perc_crossing: l >= 1");
  const double m = l;
  return {(m * m - 1.0) / 12.0, m * (m + 1.0) / 6.0};
}

struct HarmonicPoint {
  double x = 0.0;
  double tau = 0.0;
  double D = 0.0;
};

/// Harmonic moments of a critical percolation cluster.
inline HarmonicPoint perc_harmonic(double n) {
  if (!(n >= -1.0 / 24.0)) throw DomainError("perc_harmonic: n >= -1/24");
  const double r = std::sqrt(24.0 * n + 1.0);
  HarmonicPoint h;
  h.x = 2.0 + (n - 1.0) / 2.0 + (5.0 / 24.0) * (r - 5.0);
  h.tau = h.x - 2.0;
  h.D = 0.5 + 5.0 / (r + 5.0);
  return h;
}

struct HausdorffTriple {
  double d_hull = 0.0;
  double d_ep = 0.0;
  double d_sc = 0.0;
  bool pinching_points = false;  // d_sc > 0: fjords close in the scaling limit
  bool geometric_warning = false;  // kappa outside (0, 8]
};

inline HausdorffTriple hausdorff_triple(const SystemParams& p) {
  const double k = p.kappa;
  HausdorffTriple h;
  h.d_hull = 1.0 + k / 8.0;
  // The two branches are complementary; both give 3/2 at kappa = 4.
  h.d_ep = k >= 4.0 ? 1.0 + 2.0 / k : 1.0 + k / 8.0;
  h.d_sc = 1.0 + k / 8.0 - 6.0 / k;
  h.pinching_points = h.d_sc > 0.0;
  h.geometric_warning = !(k > 0.0 && k <= 8.0);
  return h;
}

// ---------------------------------------------------------------------------
// Hiding exponent (c = 0)
// ---------------------------------------------------------------------------

/// Nested-map form U[3/4 + U^-1[m + U(U^-1(n) - 3/4)]] at gamma = -1/2.
inline double hiding_exponent(double m, double n) {
  if (!(m >= 0.0) || !(n >= 0.0)) throw DomainError("hiding_exponent: m, n >= 0");
  constexpr double g = detail::kGammaZero;
  const double inner = kpz_U_inv(g, n) - 0.75;
  if (inner < 0.0)
    throw DomainError("hiding_exponent: n < 5/8, the packet cannot dress one SAW of boundary weight");
  return kpz_U(g, 0.75 + kpz_U_inv(g, m + kpz_U(g, inner)));
}

/// Closed form of hiding_exponent.
inline double hiding_exponent_closed(double m, double n) {
  if (!(m >= 0.0) || !(n >= 5.0 / 8.0)) throw DomainError("hiding_exponent_closed: m >= 0, n >= 5/8");
  const double s = std::sqrt(1.0 + 24.0 * n) - 3.0;
  return m + n + 0.25 * std::sqrt(24.0 * m + s * s) - 0.25 * s;
}

// ---------------------------------------------------------------------------
// Multiple SLE stars
// ---------------------------------------------------------------------------

struct MultipleSle {
  double x_tilde = 0.0;
  double x = 0.0;
  double qg_boundary = 0.0;  // Delta~_L (kappa <= 4) or its dual (kappa >= 4): 2L/kappa
  double qg_bulk = 0.0;
};

inline MultipleSle multiple_sle(double L, const SystemParams& p) {
  if (!(L > 0.0)) throw DomainError("multiple_sle: L > 0");
  const double k = p.kappa;
  MultipleSle m;
  m.x_tilde = (L / (2.0 * k)) * (2.0 * L + 4.0 - k);
  m.x = (4.0 * L * L - (4.0 - k) * (4.0 - k)) / (8.0 * k);
  m.qg_boundary = 2.0 * L / k;
  const double gk = 1.0 - 4.0 / k;  // gamma for kappa <= 4, gamma' for kappa >= 4
  if (k <= 4.0) {
    m.qg_bulk = (m.qg_boundary + gk) / 2.0;
  } else {
    m.qg_bulk = (m.qg_boundary - gk) / (1.0 - gk) / 2.0;
  }
  return m;
}

struct DressedSle {
  double x_tilde = 0.0;
  double x = 0.0;
  double lambda_tilde = 0.0;  // boundary derivative exponent
  double lambda = 0.0;        // bulk derivative exponent
};

/// L-strand SLE star dressed by a packet of n Brownian paths.
inline DressedSle multiple_sle_dressed(double L, double n, const SystemParams& p) {
  if (!(L > 0.0) || !(n >= 0.0)) throw DomainError("multiple_sle_dressed: L > 0, n >= 0");
  const double k = p.kappa;
  const double un = u_kappa_inv(k, n);
  const double s = 2.0 * L / k + un;
  DressedSle d;
  d.x_tilde = u_kappa(k, s);
  d.x = 2.0 * v_kappa(k, s);
  d.lambda_tilde = n + L * un;
  d.lambda = n / 2.0 + 0.5 * (L + k / 4.0 - 1.0) * un;
  return d;
}

// ---------------------------------------------------------------------------
// Contact exponents, SLE(kappa, rho)
// ---------------------------------------------------------------------------

struct ContactExponents {
  double boundary_sde = 0.0;
  double sde_with_sle = 0.0;
  double bulk_sde_with_sle = 0.0;
};

inline ContactExponents contact_exponents(const SystemParams& p, double x_tilde_a, double x_tilde_b) {
  if (!(x_tilde_a >= 0.0) || !(x_tilde_b >= 0.0)) throw DomainError("contact_exponents: inputs >= 0");
  const double k = p.kappa;
  const double ua = u_kappa_inv(k, x_tilde_a);
  const double ub = u_kappa_inv(k, x_tilde_b);
  return {0.5 * k * ua * ub, ua, ua + (k - 4.0) * (k - 4.0) / (8.0 * k)};
}

struct SleRho {
  double rho = 0.0;
  double L_equiv = 0.0;  // number of equivalent avoided strands, rho/2
};

inline SleRho sle_rho(const SystemParams& p, double n) {
  if (!(n >= 0.0)) throw DomainError("sle_rho: n >= 0");
  const double rho = p.kappa * u_kappa_inv(p.kappa, n);
  return {rho, rho / 2.0};
}

inline double rho_min(const SystemParams& p) { return (p.kappa - 4.0) * heaviside(p.kappa - 4.0); }

/// Contact exponent of an m-packet avoiding an SLE(kappa, rho) trace.
inline double sigma_contact(const SystemParams& p, double m, double rho) {
  if (!(m >= 0.0)) throw DomainError("sigma_contact: m >= 0");
  if (rho < rho_min(p) - 1e-12) throw DomainError("sigma_contact: rho < rho_min, trace cannot avoid the boundary ray");
  const double k = p.kappa;
  const double n = std::max(0.0, u_kappa(k, rho / k));
  return u_kappa_inv(k, m + n) - u_kappa_inv(k, n);
}

// ---------------------------------------------------------------------------
// Winding
// ---------------------------------------------------------------------------

/// Equivalent strand number of k strands with j disconnected adjacent pairs.
inline double winding_effective_strands(const SystemParams& p, int k, int j) {
  if (k < 1 || j < 0 || 2 * j > k) throw DomainError("winding: need k >= 1, j >= 0, 2j <= k");
  return k + j * (p.kappa / 2.0 - 2.0) * heaviside(p.kappa - 4.0);
}

inline double winding_variance(const SystemParams& p, int k, int j, double lnR) {
  if (!(lnR > 0.0)) throw DomainError("winding_variance: ln R > 0");
  const double keff = winding_effective_strands(p, k, j);
  return p.kappa / (keff * keff) * lnR;
}

}  // namespace kpz
