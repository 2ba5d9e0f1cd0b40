#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fisher_noise/errors.hpp"
#include "fisher_noise/grid.hpp"
#include "fisher_noise/problem.hpp"
#include "fisher_noise/quality.hpp"

namespace fisher_noise {

// Grid function psi with trapezoid integral of psi^2 equal to 1 (psi = 0 at
// the grid endpoints). Values may change sign: excited eigenstates are
// legitimate wave functions; ground states are selected nonnegative.
struct WaveFunction {
  Grid grid;
  std::vector<double> values;

  static WaveFunction normalized(const Grid& grid, std::vector<double> values) {
    if (static_cast<int>(values.size()) != grid.n)
      throw GridMismatch("wave function length does not match grid");
    double s = 0.0;
    for (double v : values) s += v * v;
    s *= grid.h;
    if (!(s > 0.0) || !std::isfinite(s))
      throw DegenerateDensity("wave function has zero or non-finite norm");
    const double scale = 1.0 / std::sqrt(s);
    for (double& v : values) v *= scale;
    return WaveFunction{grid, std::move(values)};
  }
};

// Probability density on a grid with a cached CDF. The CDF spans the closed
// interval: cdf()[0] = 0 at lo, cdf()[i+1] at node i, cdf()[n+1] = 1 at hi.
class NoiseDensity {
 public:
  static NoiseDensity from_values(const Grid& grid, std::vector<double> p) {
    if (static_cast<int>(p.size()) != grid.n)
      throw GridMismatch("density length does not match grid");
    for (double v : p)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw DegenerateDensity("density values must be finite and nonnegative");
    double mass = trapezoid_zero_ends(grid, p);
    if (!(mass > 0.0))
      throw DegenerateDensity("density has zero mass");
    for (double& v : p) v /= mass;
    return NoiseDensity(grid, std::move(p));
  }

  const Grid& grid() const { return grid_; }
  const std::vector<double>& p() const { return p_; }
  // n+2 cumulative values at lo, nodes, hi; ends exactly at 1.
  const std::vector<double>& cdf() const { return cdf_; }

  // Inverse CDF by linear interpolation between cached nodes.
  // quantile(0) = lo, quantile(1) = hi.
  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0))
      throw OutOfRange("quantile argument must lie in [0, 1]");
    if (u == 0.0) return grid_.lo;
    if (u == 1.0) return grid_.hi;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    size_t k = static_cast<size_t>(it - cdf_.begin());  // cdf_[k-1] <= u < cdf_[k]
    if (k == 0) return grid_.lo;
    if (k >= cdf_.size()) return grid_.hi;
    const double c0 = cdf_[k - 1], c1 = cdf_[k];
    const double x0 = abscissa(k - 1), x1 = abscissa(k);
    if (!(c1 > c0)) return x1;  // stagnant segment (density ~ 0 there)
    return x0 + (u - c0) / (c1 - c0) * (x1 - x0);
  }

 private:
  NoiseDensity(const Grid& grid, std::vector<double> p)
      : grid_(grid), p_(std::move(p)) {
    build_cdf();
  }

  double abscissa(size_t k) const {
    if (k == 0) return grid_.lo;
    if (k == static_cast<size_t>(grid_.n) + 1) return grid_.hi;
    return grid_.node(static_cast<int>(k) - 1);
  }

  void build_cdf() {
    const size_t n = p_.size();
    cdf_.assign(n + 2, 0.0);
    // Trapezoid accumulation with p = 0 at the walls.
    cdf_[1] = 0.5 * grid_.h * p_[0];
    for (size_t i = 1; i < n; ++i)
      cdf_[i + 1] = cdf_[i] + 0.5 * grid_.h * (p_[i - 1] + p_[i]);
    cdf_[n + 1] = cdf_[n] + 0.5 * grid_.h * p_[n - 1];
    const double total = cdf_[n + 1];
    for (double& c : cdf_) c /= total;
    cdf_[0] = 0.0;
    cdf_[n + 1] = 1.0;
  }

  Grid grid_;
  std::vector<double> p_;
  std::vector<double> cdf_;
};

inline NoiseDensity density_from_wavefunction(const WaveFunction& psi) {
  std::vector<double> p(psi.values.size());
  for (size_t i = 0; i < p.size(); ++i) p[i] = psi.values[i] * psi.values[i];
  return NoiseDensity::from_values(psi.grid, std::move(p));
}

// Fisher information of the noise, computed as 4 * integral of (psi')^2 with
// psi = sqrt(p). The identity int (p')^2/p = 4 int (psi')^2 is an exact
// change of variables and avoids 0/0 where p vanishes.
//
// psi' samples: central differences at the interior nodes (walls enter as
// psi = 0) and one-sided differences at the walls themselves; the trapezoid
// rule then integrates (psi')^2 over the closed interval. The wall samples
// matter: densities that do not vanish at the support edge (uniform-like)
// carry most of their Fisher information there.
inline double fisher_information(const NoiseDensity& d) {
  const std::vector<double>& p = d.p();
  const Grid& g = d.grid();
  const size_t n = p.size();
  for (double v : p)
    if (v < 0.0) throw DegenerateDensity("density has negative values");
  std::vector<double> psi(n);
  for (size_t i = 0; i < n; ++i) psi[i] = std::sqrt(p[i]);

  const double inv_h = 1.0 / g.h;
  const double inv_2h = 0.5 * inv_h;
  auto at = [&](size_t i) -> double { return i >= 1 && i <= n ? psi[i - 1] : 0.0; };

  double sum = 0.0;
  const double d_lo = psi[0] * inv_h;          // one-sided at the lo wall
  const double d_hi = -psi[n - 1] * inv_h;     // one-sided at the hi wall
  sum += 0.5 * (d_lo * d_lo + d_hi * d_hi);
  for (size_t i = 1; i <= n; ++i) {
    const double c = (at(i + 1) - at(i - 1)) * inv_2h;
    sum += c * c;
  }
  return 4.0 * g.h * sum;
}

// Quality functional: trapezoid value of integral g(w) p(w) dw.
inline double quality(const NoiseDensity& d, const QualityFn& g) {
  if (g.is_zero()) return 0.0;
  const Grid& grid = d.grid();
  const std::vector<double>& p = d.p();
  double s = 0.0;
  for (int i = 0; i < grid.n; ++i)
    s += g(grid.node(i)) * p[static_cast<size_t>(i)];
  return grid.h * s;
}

// Closed-form density of the n-th infinite-well state on [-a, a]:
// p(w) = sin^2(n pi (w - a) / (2a)) / a, renormalized on the grid.
inline NoiseDensity analytic_square_well(double a, int n, GridConfig cfg) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw InvalidSupport("square well half-width must be positive");
  if (n < 1) throw IndexOutOfRange("square well state index must be >= 1");
  Grid grid = Grid::make(-a, a, cfg.n_points);
  std::vector<double> p(static_cast<size_t>(grid.n));
  for (int i = 0; i < grid.n; ++i) {
    const double s = std::sin(n * M_PI * (grid.node(i) - a) / (2.0 * a));
    p[static_cast<size_t>(i)] = s * s / a;
  }
  return NoiseDensity::from_values(grid, std::move(p));
}

// Truncated-and-renormalized Gaussian with variance rho. The box must cover
// at least +-10 sqrt(rho) so that the discarded tail mass (< 1e-20) is far
// below every solver tolerance.
inline NoiseDensity analytic_gaussian(double rho, GridConfig cfg,
                                      std::optional<double> half_width = std::nullopt) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw InvalidBudget("gaussian variance must be positive");
  const double required = 10.0 * std::sqrt(rho);
  const double L = half_width.value_or(required);
  if (L < required)
    throw DomainTooSmall("gaussian grid half-width must be at least 10*sqrt(rho)");
  Grid grid = Grid::make(-L, L, cfg.n_points);
  std::vector<double> p(static_cast<size_t>(grid.n));
  const double norm = 1.0 / std::sqrt(2.0 * M_PI * rho);
  for (int i = 0; i < grid.n; ++i) {
    const double w = grid.node(i);
    p[static_cast<size_t>(i)] = norm * std::exp(-w * w / (2.0 * rho));
  }
  return NoiseDensity::from_values(grid, std::move(p));
}

}  // namespace fisher_noise
