#pragma once

// Power-law fits by ordinary least squares on (ln x, ln y).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "kpz/errors.hpp"

namespace kpz::mc {

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct FitResult {
  double exponent = 0.0;
  double std_error = 0.0;  // residual-based, no autocorrelation correction
  double intercept = 0.0;  // ln prefactor
  FitWindow window;
  std::size_t samples = 0;  // points in the window
  std::uint64_t seed = 0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
};

/// Plain OLS y = a + b x; needs at least three points for a residual variance.
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3 || y.size() != n) throw StatisticsError("linear_fit: need at least three paired points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw StatisticsError("linear_fit: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.slope_error = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  return f;
}

/// Default window: drop the smallest and largest 20% of the (sorted) scales.
inline FitWindow auto_window(std::vector<double> xs) {
  if (xs.empty()) throw StatisticsError("auto_window: no data");
  std::sort(xs.begin(), xs.end());
  const std::size_t drop = xs.size() / 5;
  return {xs[drop], xs[xs.size() - 1 - drop]};
}

/// Fits y ~ A x^exponent over the window (inclusive). Needs >= 5 points in it.
inline FitResult fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys,
                               std::optional<FitWindow> window = std::nullopt) {
  if (xs.size() != ys.size()) throw DomainError("fit_power_law: x and y differ in length");
  const FitWindow w = window ? *window : auto_window(xs);
  std::vector<double> lx, ly;
  double used_lo = std::numeric_limits<double>::infinity(), used_hi = -used_lo;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < w.lo || xs[i] > w.hi) continue;
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("fit_power_law: non-positive data in window");
    used_lo = std::min(used_lo, xs[i]);
    used_hi = std::max(used_hi, xs[i]);
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  if (lx.size() < 5) throw StatisticsError("fit_power_law: fewer than 5 points in window");
  const LinearFit lf = linear_fit(lx, ly);
  FitResult r;
  r.exponent = lf.slope;
  r.intercept = lf.intercept;
  // Exact data would give zero; keep the error bar strictly positive.
  r.std_error = std::max(lf.slope_error, 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lf.slope)));
  r.window = {used_lo, used_hi};
  r.samples = lx.size();
  return r;
}

/// z-score of an estimate against a prediction.
inline double z_score(const FitResult& f, double predicted) { return (f.exponent - predicted) / f.std_error; }

}  // namespace kpz::mc
