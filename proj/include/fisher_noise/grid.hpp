#pragma once

#include <cmath>
#include <vector>

#include "fisher_noise/errors.hpp"

namespace fisher_noise {

// Uniform 1D grid of n interior nodes on (lo, hi). The endpoints lo and hi
// are boundary points (Dirichlet walls), not stored: node i sits at
// lo + (i+1)*h with h = (hi-lo)/(n+1), i = 0..n-1.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
  double h = 0.0;

  static Grid make(double lo, double hi, int n) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi))
      throw InvalidSupport("grid bounds must be finite with lo < hi");
    if (n < 1) throw GridTooCoarse("grid needs at least one interior node");
    Grid g;
    g.lo = lo;
    g.hi = hi;
    g.n = n;
    g.h = (hi - lo) / (n + 1);
    return g;
  }

  double node(int i) const { return lo + (i + 1) * h; }

  std::vector<double> nodes() const {
    std::vector<double> w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = node(i);
    return w;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.lo == b.lo && a.hi == b.hi && a.n == b.n;
  }
};

// Trapezoid rule over [lo, hi] for integrand samples at the interior nodes,
// taking the value 0 at both endpoints: h * sum(values).
inline double trapezoid_zero_ends(const Grid& grid,
                                  const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return grid.h * s;
}

}  // namespace fisher_noise
