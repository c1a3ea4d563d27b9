#pragma once

// Parameter conversions for conformally invariant curves: SLE kappa, central
// charge c, string susceptibility gamma and its dual, Coulomb gas coupling g,
// and the quadratic KPZ maps between plane and quantum-gravity dimensions.

#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

#include "kpz/errors.hpp"

namespace kpz {

enum class Phase { Dilute, Dense };

inline constexpr std::string_view to_string(Phase p) {
  return p == Phase::Dilute ? "dilute" : "dense";
}

/// Heaviside step with theta(0) = 1.
inline constexpr double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

struct SystemParams {
  double kappa = 0.0;
  double c = 0.0;
  double gamma = 0.0;       // standard root, <= 0
  double gamma_dual = 0.0;  // positive root, (1-gamma)(1-gamma_dual) = 1
  double g = 0.0;           // Coulomb gas coupling, 4/kappa
  double b = 0.0;           // (25-c)/12
  Phase phase = Phase::Dilute;

  /// Space-filling regime: the algebra still applies, geometric readings do not.
  bool space_filling() const { return kappa >= 8.0; }
};

inline double c_from_gamma(double gamma) { return 1.0 - 6.0 * gamma * gamma / (1.0 - gamma); }

inline double c_from_kappa(double kappa) {
  const double s = kappa / 4.0 - 1.0;
  return 1.0 - 24.0 * s * s / kappa;
}

enum class GammaBranch { Standard, Dual };

/// Roots of 6 gamma^2 + (1-c) gamma - (1-c) = 0. Standard is the root <= 0.
inline double gamma_from_c(double c, GammaBranch branch = GammaBranch::Standard) {
  if (!(c <= 1.0) || !std::isfinite(c)) throw DomainError("gamma_from_c: central charge must satisfy c <= 1");
  const double disc = std::sqrt((1.0 - c) * (25.0 - c));
  return branch == GammaBranch::Standard ? ((c - 1.0) - disc) / 12.0 : ((c - 1.0) + disc) / 12.0;
}

inline SystemParams params_from_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw DomainError("params_from_kappa: kappa must be positive and finite");
  SystemParams p;
  p.kappa = kappa;
  p.phase = kappa <= 4.0 ? Phase::Dilute : Phase::Dense;
  if (kappa <= 4.0) {
    p.gamma = 1.0 - 4.0 / kappa;
    p.gamma_dual = 1.0 - kappa / 4.0;
  } else {
    p.gamma = 1.0 - kappa / 4.0;
    p.gamma_dual = 1.0 - 4.0 / kappa;
  }
  p.c = c_from_kappa(kappa);
  p.g = 4.0 / kappa;
  p.b = (25.0 - p.c) / 12.0;
  return p;
}

/// c alone does not fix kappa; the phase picks kappa <= 4 or its dual 16/kappa.
inline SystemParams params_from_c(double c, Phase phase) {
  const double gamma = gamma_from_c(c, GammaBranch::Standard);
  const double kappa = phase == Phase::Dilute ? 4.0 / (1.0 - gamma) : 4.0 * (1.0 - gamma);
  SystemParams p = params_from_kappa(kappa);
  // Keep the requested c bit-exact; the kappa round trip loses a few ulps.
  p.c = c;
  p.b = (25.0 - c) / 12.0;
  p.gamma = gamma;
  p.gamma_dual = gamma_from_c(c, GammaBranch::Dual);
  p.phase = phase;
  return p;
}

// ---------------------------------------------------------------------------
// KPZ maps parameterized by gamma
// ---------------------------------------------------------------------------

/// Plane dimension from a quantum-gravity dimension: Delta (Delta - gamma) / (1 - gamma).
inline double kpz_U(double gamma, double delta) { return delta * (delta - gamma) / (1.0 - gamma); }

/// Plane bulk dimension from a boundary QG dimension (half of x in the plane).
inline double kpz_V(double gamma, double x) { return (x * x - gamma * gamma) / (4.0 * (1.0 - gamma)); }

/// Positive inverse of kpz_U.
inline double kpz_U_inv(double gamma, double x) {
  const double rad = 4.0 * (1.0 - gamma) * x + gamma * gamma;
  if (rad < 0.0) throw DomainError("kpz_U_inv: argument below the branch point");
  return (std::sqrt(rad) + gamma) / 2.0;
}

// ---------------------------------------------------------------------------
// Unified SLE maps; equal to the gamma maps for kappa <= 4 and to the dual
// (gamma') maps for kappa >= 4.
// ---------------------------------------------------------------------------

inline double u_kappa(double kappa, double delta) { return delta * (kappa * delta + 4.0 - kappa) / 4.0; }

inline double v_kappa(double kappa, double delta) {
  const double k4 = kappa - 4.0;
  return (kappa * kappa * delta * delta - k4 * k4) / (16.0 * kappa);
}

inline double u_kappa_inv(double kappa, double x) {
  const double k4 = kappa - 4.0;
  const double rad = 16.0 * kappa * x + k4 * k4;
  if (rad < 0.0) throw DomainError("u_kappa_inv: argument below the branch point");
  return (std::sqrt(rad) + k4) / (2.0 * kappa);
}

/// Dual QG dimension Delta' = (Delta - gamma)/(1 - gamma); x = Delta Delta'.
inline double dual_dimension(double gamma, double delta) { return (delta - gamma) / (1.0 - gamma); }

/// Bulk QG weight from the standard boundary QG weight, per phase:
/// dilute 2 Delta - gamma = Delta~, dense 2 Delta = Delta~.
inline double bulk_from_boundary_qg(const SystemParams& p, double boundary_qg) {
  return p.phase == Phase::Dilute ? (boundary_qg + p.gamma) / 2.0 : boundary_qg / 2.0;
}

// ---------------------------------------------------------------------------
// Coulomb gas dictionary
// ---------------------------------------------------------------------------

struct CoulombEntry {
  double g = 0.0;
  double N = 0.0;
  std::optional<double> Q;  // Potts Q, only where N >= 0
  double kappa = 0.0;
  double c = 0.0;
};

inline CoulombEntry coulomb_dictionary(double g) {
  if (!(g > 0.0 && g <= 2.0)) throw DomainError("coulomb_dictionary: g must lie in (0, 2]");
  CoulombEntry e;
  e.g = g;
  e.N = -2.0 * std::cos(std::numbers::pi * g);
  if (e.N >= -1e-15) e.Q = e.N * e.N;
  e.kappa = 4.0 / g;
  e.c = 1.0 - 6.0 * (1.0 - g) * (1.0 - g) / g;
  return e;
}

/// Coupling g in [1/2, 1] of the critical Q-state Potts model, sqrt(Q) = -2 cos(pi g).
inline double potts_coupling(double Q) {
  if (!(Q >= 0.0 && Q <= 4.0)) throw DomainError("potts_coupling: Q must lie in [0, 4]");
  return std::acos(-std::sqrt(Q) / 2.0) / std::numbers::pi;
}

}  // namespace kpz
