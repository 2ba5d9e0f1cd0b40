#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fisher_noise/density.hpp"
#include "fisher_noise/errors.hpp"
#include "fisher_noise/grid.hpp"

namespace fisher_noise {

struct PotentialGrid {
  Grid grid;
  std::vector<double> v;

  template <typename Fn>
  static PotentialGrid from_fn(const Grid& grid, Fn&& fn) {
    PotentialGrid pg{grid, std::vector<double>(static_cast<size_t>(grid.n))};
    for (int i = 0; i < grid.n; ++i) {
      const double val = fn(grid.node(i));
      if (!std::isfinite(val))
        throw DegenerateDensity("potential must be finite at interior nodes");
      pg.v[static_cast<size_t>(i)] = val;
    }
    return pg;
  }
};

// Second-order discretization of -d^2/dw^2 + V(w) with Dirichlet walls
// (the infinite potential outside the support is exactly psi = 0 at the
// endpoints, which the stencil realizes by omitting the boundary nodes).
// diag_i = 2/h^2 + v_i, offdiag = -1/h^2 (constant, strictly negative, so the
// matrix is irreducible: eigenvalues are simple and the ground state is
// sign-definite).
struct TridiagonalOperator {
  Grid grid;
  std::vector<double> diag;
  std::vector<double> potential;  // kept for a cancellation-free apply()
  double offdiag = 0.0;

  // y = T x evaluated as v*x - (difference of neighbor differences)/h^2.
  // Forming the second difference before dividing keeps the subtraction
  // exact (neighbor values are close), so residuals can be resolved near
  // machine precision even when 2/h^2 is ~1e10.
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    const size_t n = x.size();
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    double dd_prev = x[0];  // x_0 - wall
    for (size_t i = 0; i < n; ++i) {
      const double dd_next = (i + 1 < n ? x[i + 1] : 0.0) - x[i];
      y[i] = potential[i] * x[i] - (dd_next - dd_prev) * inv_h2;
      dd_prev = dd_next;
    }
  }
};

// residual_norm is the max-norm defect max_i |(T x)_i - E x_i| of the
// unit-l2 eigenpair. It meets 1e-10 * max(1, |E|) whenever double precision
// allows; a unit vector's own rounding already produces a defect of order
// 4 * eps * max|x| / h^2 through the stencil, so on very fine grids that
// representation floor is the attainable (and accepted) tolerance.
struct EigenPair {
  double eigenvalue = 0.0;
  WaveFunction eigenvector;
  double residual_norm = 0.0;
  int iterations = 0;
};

inline TridiagonalOperator assemble(const Grid& grid, const PotentialGrid& potential) {
  if (!(potential.grid == grid) ||
      static_cast<int>(potential.v.size()) != grid.n)
    throw GridMismatch("potential grid does not match operator grid");
  TridiagonalOperator op;
  op.grid = grid;
  op.potential = potential.v;
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  op.offdiag = -inv_h2;
  op.diag.resize(static_cast<size_t>(grid.n));
  for (size_t i = 0; i < op.diag.size(); ++i)
    op.diag[i] = 2.0 * inv_h2 + potential.v[i];
  return op;
}

namespace detail {

// Number of eigenvalues of T strictly below sigma (Sturm sequence via the
// signs of the LDL^T pivots).
inline int sturm_count(const TridiagonalOperator& op, double sigma) {
  const double e2 = op.offdiag * op.offdiag;
  const double pivmin = 1e-290;
  int count = 0;
  double q = 1.0;
  for (size_t i = 0; i < op.diag.size(); ++i) {
    q = op.diag[i] - sigma - (i == 0 ? 0.0 : e2 / q);
    if (std::abs(q) < pivmin) q = (q < 0.0 ? -pivmin : pivmin);
    if (q < 0.0) ++count;
  }
  return count;
}

// Bisection window [lo, hi) containing exactly the k-th smallest eigenvalue
// (0-based), narrowed to ~1e-14 relative width.
inline std::pair<double, double> isolate_eigenvalue(const TridiagonalOperator& op,
                                                    int k, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted in fp
    if (sturm_count(op, mid) > k)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-14 * std::max({1.0, std::abs(lo), std::abs(hi)})) break;
  }
  return {lo, hi};
}

// Solve (T - sigma I) x = b for a tridiagonal T with constant offdiagonal,
// by Gaussian elimination with partial pivoting (fill-in on the second
// superdiagonal). Near-singular pivots are replaced by a tiny value, which
// is exactly what inverse iteration wants.
inline void shifted_solve(const TridiagonalOperator& op, double sigma,
                          std::vector<double> b, std::vector<double>& x) {
  const size_t n = op.diag.size();
  const double e = op.offdiag;
  std::vector<double> d(n), u1(n, 0.0), u2(n, 0.0);
  for (size_t i = 0; i < n; ++i) d[i] = op.diag[i] - sigma;
  for (size_t i = 0; i + 1 < n; ++i) u1[i] = e;

  const double pivmin = 1e-290;
  for (size_t i = 0; i + 1 < n; ++i) {
    double sub = e;  // remaining subdiagonal entry in row i+1
    if (std::abs(sub) > std::abs(d[i])) {
      std::swap(d[i], sub);
      std::swap(u1[i], d[i + 1]);
      std::swap(u2[i], u1[i + 1]);
      std::swap(b[i], b[i + 1]);
    }
    if (std::abs(d[i]) < pivmin) d[i] = (d[i] < 0.0 ? -pivmin : pivmin);
    const double m = sub / d[i];
    d[i + 1] -= m * u1[i];
    u1[i + 1] -= m * u2[i];
    b[i + 1] -= m * b[i];
  }
  if (std::abs(d[n - 1]) < pivmin) d[n - 1] = (d[n - 1] < 0.0 ? -pivmin : pivmin);

  x.resize(n);
  for (size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    if (ii + 1 < n) s -= u1[ii] * x[ii + 1];
    if (ii + 2 < n) s -= u2[ii] * x[ii + 2];
    x[ii] = s / d[ii];
  }
}

inline double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Deterministic generic-position seed vector (overlaps every eigenvector).
inline std::vector<double> seed_vector(size_t n) {
  std::vector<double> x(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  for (size_t i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    x[i] = 0.5 + static_cast<double>(state >> 40) * 0x1.0p-24;
  }
  return x;
}

// Interior sign changes, ignoring entries at roundoff level relative to the
// peak (deep tails of localized states sit below solver noise).
inline int count_sign_changes(const std::vector<double>& x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  const double floor = 1e-12 * peak;
  int changes = 0;
  double prev = 0.0;
  for (double v : x) {
    if (std::abs(v) <= floor) continue;
    if (prev != 0.0 && ((prev < 0.0) != (v < 0.0))) ++changes;
    prev = v;
  }
  return changes;
}

inline EigenPair solve_state(const TridiagonalOperator& op, int k) {
  const size_t n = op.diag.size();
  const int max_iters = 500;
  const double eps = std::numeric_limits<double>::epsilon();
  const double inv_h2 = 1.0 / (op.grid.h * op.grid.h);

  // Gershgorin window; for the ground state the Rayleigh quotient of the
  // seed is a tighter upper bound.
  double glo = std::numeric_limits<double>::infinity();
  double ghi = -std::numeric_limits<double>::infinity();
  for (double dv : op.diag) {
    glo = std::min(glo, dv);
    ghi = std::max(ghi, dv);
  }
  glo -= 2.0 * std::abs(op.offdiag);
  ghi += 2.0 * std::abs(op.offdiag);

  std::vector<double> x = seed_vector(n), y(n), tx(n);
  if (k == 0) {
    const double nx = norm2(x);
    for (double& v : x) v /= nx;
    op.apply(x, tx);
    double rq = 0.0;
    for (size_t i = 0; i < n; ++i) rq += x[i] * tx[i];
    ghi = std::min(ghi, rq + std::abs(rq) * 1e-12 + 1e-300);
  }

  auto [lo, hi] = isolate_eigenvalue(op, k, glo, ghi);
  const double sigma = 0.5 * (lo + hi);

  // A unit-norm double vector cannot carry a residual below the rounding of
  // its own entries through the 1/h^2 stencil; accept that floor where it
  // exceeds the nominal tolerance (very fine grids).
  auto tolerance = [&](double th, double xmax) {
    return std::max(1e-10 * std::max(1.0, std::abs(th)),
                    8.0 * eps * xmax * inv_h2);
  };

  // One inverse-iteration step isolates the eigenvector up to a perturbation
  // at the solver's backward-error level (~eps * 2/h^2). Subsequent defect
  // corrections x -= (T - sigma)^{-1} (Tx - theta x) push the residual down
  // to the representation floor: apply() evaluates defects without the
  // cancellation that limits the triangular solve.
  double theta = sigma;
  double residual = std::numeric_limits<double>::infinity();
  double xmax = 0.0;
  int iters = 0;
  bool have_vector = false;
  while (iters < max_iters) {
    ++iters;
    if (!have_vector) {
      shifted_solve(op, sigma, x, y);
      have_vector = true;
    } else {
      for (size_t i = 0; i < n; ++i) tx[i] -= theta * x[i];  // defect
      shifted_solve(op, sigma, tx, y);
      for (size_t i = 0; i < n; ++i) y[i] = x[i] - y[i];
    }
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny))
      throw NoConvergence("inverse iteration produced a degenerate vector");
    for (size_t i = 0; i < n; ++i) x[i] = y[i] / ny;

    op.apply(x, tx);
    theta = 0.0;
    xmax = 0.0;
    for (size_t i = 0; i < n; ++i) {
      theta += x[i] * tx[i];
      xmax = std::max(xmax, std::abs(x[i]));
    }
    residual = 0.0;
    for (size_t i = 0; i < n; ++i)
      residual = std::max(residual, std::abs(tx[i] - theta * x[i]));
    if (residual <= tolerance(theta, xmax)) break;
  }
  if (residual > tolerance(theta, xmax))
    throw NoConvergence("eigen solve stalled after " + std::to_string(iters) +
                        " iterations (state " + std::to_string(k + 1) +
                        ", residual " + std::to_string(residual) + ")");

  // Deterministic sign: value at the node nearest the domain center >= 0
  // (ties toward lo).
  const size_t center = (n - 1) / 2;
  if (x[center] < 0.0)
    for (double& v : x) v = -v;

  const int changes = count_sign_changes(x);
  if (changes != k)
    throw NoConvergence("state " + std::to_string(k + 1) + " has " +
                        std::to_string(changes) + " sign changes, expected " +
                        std::to_string(k));
  if (k == 0)
    for (double& v : x) v = std::abs(v);  // clip roundoff wiggle to the nonnegative branch

  EigenPair pair;
  pair.eigenvalue = theta;
  pair.eigenvector = WaveFunction::normalized(op.grid, std::move(x));
  pair.residual_norm = residual;
  pair.iterations = iters;
  return pair;
}

}  // namespace detail

// Smallest eigenpair; the eigenvector is nodeless and nonnegative.
inline EigenPair ground_state(const TridiagonalOperator& op) {
  return detail::solve_state(op, 0);
}

// n-th smallest eigenpair (1-based); its eigenvector has exactly n-1
// interior sign changes. Excited states are suboptimal designs and exist
// for the test surface.
inline EigenPair nth_state(const TridiagonalOperator& op, int n) {
  if (n < 1 || n > static_cast<int>(op.diag.size()))
    throw IndexOutOfRange("state index must lie in [1, grid size]");
  return detail::solve_state(op, n - 1);
}

}  // namespace fisher_noise
