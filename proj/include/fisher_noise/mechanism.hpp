#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fisher_noise/density.hpp"
#include "fisher_noise/errors.hpp"

namespace fisher_noise {

// Uniform [0,1) stream with a platform-independent contract: mt19937_64 has
// a standard-pinned output sequence, and the mapping to doubles is done by
// hand (library distributions are not reproducible across implementations).
class UniformRng {
 public:
  explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Scalar query f. The identity query is the canonical attack target; affine
// queries rescale the same location problem.
struct QuerySpec {
  enum class Kind { IdentityScalar, AffineScalar };

  Kind kind = Kind::IdentityScalar;
  double slope = 1.0;
  double intercept = 0.0;

  static QuerySpec identity() { return QuerySpec{}; }

  static QuerySpec affine(double slope, double intercept) {
    if (slope == 0.0 || !std::isfinite(slope))
      throw OutOfRange("affine query needs a nonzero finite slope");
    return QuerySpec{Kind::AffineScalar, slope, intercept};
  }

  double operator()(double x) const {
    return kind == Kind::IdentityScalar ? x : slope * x + intercept;
  }
};

struct AttackReport {
  long trials = 0;
  double empirical_mse = 0.0;
  double cramer_rao_floor = 0.0;
  double empirical_bias = 0.0;
  std::uint64_t seed = 0;
};

// Inverse-CDF sampling. Identical seed gives an identical stream across runs
// and platforms; every sample lies in [lo, hi] of the support.
inline std::vector<double> sample(const NoiseDensity& d, std::uint64_t seed,
                                  long count) {
  if (count < 1) throw OutOfRange("sample count must be >= 1");
  UniformRng rng(seed);
  std::vector<double> w(static_cast<size_t>(count));
  for (double& v : w) v = d.quantile(rng.next());
  return w;
}

// The noisy-response mechanism: y = f(x) + w.
inline double respond(const QuerySpec& query, double x, const NoiseDensity& d,
                      std::uint64_t seed) {
  return query(x) + sample(d, seed, 1)[0];
}

namespace detail {

// Mode of the density, refined by one parabolic interpolation step in log p.
// In the location model the MLE is y minus this constant.
inline double refined_mode(const NoiseDensity& d) {
  const std::vector<double>& p = d.p();
  const Grid& g = d.grid();
  // Ties go to the later (larger-w) node, which maps to the smaller estimate.
  size_t j = 0;
  for (size_t i = 1; i < p.size(); ++i)
    if (p[i] >= p[j]) j = i;
  double w = g.node(static_cast<int>(j));
  if (j == 0 || j + 1 >= p.size()) return w;
  if (!(p[j - 1] > 0.0) || !(p[j + 1] > 0.0)) return w;
  const double lm = std::log(p[j - 1]);
  const double l0 = std::log(p[j]);
  const double lp = std::log(p[j + 1]);
  const double denom = lm - 2.0 * l0 + lp;
  if (!(denom < 0.0)) return w;
  double delta = 0.5 * (lm - lp) / denom * g.h;
  if (delta > 0.5 * g.h) delta = 0.5 * g.h;
  if (delta < -0.5 * g.h) delta = -0.5 * g.h;
  return w + delta;
}

}  // namespace detail

// Maximum-likelihood estimate of x from one response y = x + w: the argmax
// over x of log p(y - x), evaluated on the grid offsets and refined with one
// parabolic step; ties break toward the smallest x.
inline double mle_estimate(const NoiseDensity& d, double y) {
  return y - detail::refined_mode(d);
}

// Monte-Carlo attack on the identity query: repeated respond + mle_estimate,
// reported against the Cramer-Rao floor 1/J. Bit-reproducible from
// (density, x_true, trials, seed).
inline AttackReport monte_carlo_attack(const NoiseDensity& d, double x_true,
                                       long trials, std::uint64_t seed) {
  if (trials < 1000) throw OutOfRange("attack needs at least 1000 trials");
  const std::vector<double> noise = sample(d, seed, trials);
  const double mode = detail::refined_mode(d);
  double sum_err = 0.0, sum_sq = 0.0;
  for (double w : noise) {
    const double estimate = (x_true + w) - mode;
    const double err = estimate - x_true;
    sum_err += err;
    sum_sq += err * err;
  }
  AttackReport r;
  r.trials = trials;
  r.empirical_bias = sum_err / static_cast<double>(trials);
  r.empirical_mse = sum_sq / static_cast<double>(trials);
  r.cramer_rao_floor = 1.0 / fisher_information(d);
  r.seed = seed;
  return r;
}

}  // namespace fisher_noise
