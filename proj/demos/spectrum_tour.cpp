// A short walk through the harmonic-measure spectra of a few classic curves:
// characteristic exponents, then f(alpha) on a coarse alpha grid.
#include <cmath>
#include <cstdio>

#include "kpz/catalog.hpp"
#include "kpz/multifractal.hpp"

int main() {
  struct Case {
    const char* name;
    double kappa;
  };
  const Case cases[] = {{"loop-erased walk", 2.0}, {"self-avoiding walk", 8.0 / 3.0},
                        {"Ising interface", 3.0},   {"percolation hull", 6.0}};

  std::printf("%-20s %6s %8s %8s %9s %9s %9s\n", "curve", "kappa", "c", "D_H", "D_EP", "alpha^", "theta^/pi");
  for (const auto& cs : cases) {
    const auto p = kpz::params_from_kappa(cs.kappa);
    std::printf("%-20s %6.3f %8.4f %8.4f %9.5f %9.5f %9.5f\n", cs.name, cs.kappa, std::abs(p.c) < 1e-12 ? 0.0 : p.c, kpz::hausdorff_triple(p).d_hull,
                kpz::d_ep(p), kpz::alpha_hat(p), kpz::theta_hat(p) / 3.141592653589793);
  }

  std::printf("\nf(alpha)\n%8s", "alpha");
  for (const auto& cs : cases) std::printf(" %10.3f", cs.kappa);
  std::printf("\n");
  for (double alpha : {0.6, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 50.0}) {
    std::printf("%8.2f", alpha);
    for (const auto& cs : cases) std::printf(" %10.5f", kpz::f_of_alpha(alpha, kpz::params_from_kappa(cs.kappa)));
    std::printf("\n");
  }

  // Generalized dimensions D(n) of the percolation hull; D(0) is the hull dimension.
  std::printf("\npercolation D(n):");
  for (double n : {0.0, 1.0, 2.0, 3.0, 4.0}) std::printf(" %.5f", kpz::perc_harmonic(n).D);
  std::printf("\n");
}
