#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "fisher_noise/density.hpp"
#include "fisher_noise/solver.hpp"
#include "oracles.hpp"

using namespace fisher_noise;

namespace {

// Rescale a density under w -> s*w (same node count, scaled box).
NoiseDensity rescale(const NoiseDensity& d, double s) {
  Grid g = Grid::make(s * d.grid().lo, s * d.grid().hi, d.grid().n);
  std::vector<double> p(d.p());
  for (double& v : p) v /= s;
  return NoiseDensity::from_values(g, std::move(p));
}

}  // namespace

TEST_CASE("density from ground-state wave function reproduces the well closed form") {
  Grid g = Grid::make(-1.0, 1.0, 4000);
  auto op = assemble(g, PotentialGrid::from_fn(g, [](double) { return 0.0; }));
  NoiseDensity d = density_from_wavefunction(ground_state(op).eigenvector);
  double max_err = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double c = std::cos(M_PI * g.node(i) / 2.0);
    max_err = std::max(max_err, std::abs(d.p()[static_cast<size_t>(i)] - c * c));
  }
  CHECK(max_err < 1e-6);
}

TEST_CASE("density from a spiky wave function keeps unit mass") {
  Grid g = Grid::make(0.0, 1.0, 101);
  std::vector<double> psi(101, 0.0);
  psi[50] = 3.0;
  NoiseDensity d = density_from_wavefunction(WaveFunction::normalized(g, psi));
  CHECK(trapezoid_zero_ends(g, d.p()) == Catch::Approx(1.0).margin(1e-10));
  CHECK(d.p()[50] > 0.0);
}

TEST_CASE("gaussian ground state matches the standard normal") {
  Grid g = Grid::make(-10.0, 10.0, 4000);
  auto op = assemble(g, PotentialGrid::from_fn(g, [](double w) { return 0.25 * w * w; }));
  NoiseDensity d = density_from_wavefunction(ground_state(op).eigenvector);
  double max_err = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double w = g.node(i);
    const double t = std::exp(-0.5 * w * w) / std::sqrt(2.0 * M_PI);
    max_err = std::max(max_err, std::abs(d.p()[static_cast<size_t>(i)] - t));
  }
  CHECK(max_err < 1e-6);
}

TEST_CASE("fisher information of the closed-form well states") {
  // n = 1, a = 1: oracle = quadrature of 4 (psi')^2 on the closed form
  const double oracle_j1 = oracles::fisher_by_quadrature(
      [](double w) { return (M_PI / 2.0) * std::cos(M_PI * (w - 1.0) / 2.0); },
      -1.0, 1.0);
  CHECK(oracle_j1 == Catch::Approx(oracles::kPiSq).epsilon(1e-10));
  CHECK(fisher_information(analytic_square_well(1.0, 1, GridConfig{4000})) ==
        Catch::Approx(oracles::kPiSq).epsilon(1e-3));

  // first excited state: J = 4 pi^2 (finer grid: sqrt(p) has a kink at the
  // interior zero crossing, which costs one order at the crossing cells)
  CHECK(fisher_information(analytic_square_well(1.0, 2, GridConfig{8000})) ==
        Catch::Approx(4.0 * oracles::kPiSq).epsilon(1e-3));

  // a = 2: the quadrature oracle gives pi^2/a^2
  const double oracle_a2 = oracles::fisher_by_quadrature(
      [](double w) {
        return (M_PI / 4.0) * std::cos(M_PI * (w - 2.0) / 4.0) / std::sqrt(2.0);
      },
      -2.0, 2.0);
  CHECK(oracle_a2 == Catch::Approx(oracles::kPiSq / 4.0).epsilon(1e-10));
  CHECK(fisher_information(analytic_square_well(2.0, 1, GridConfig{4000})) ==
        Catch::Approx(oracle_a2).epsilon(1e-3));
}

TEST_CASE("fisher information of truncated gaussians") {
  CHECK(fisher_information(analytic_gaussian(1.0, GridConfig{4000})) ==
        Catch::Approx(1.0).margin(1e-4));
  CHECK(fisher_information(analytic_gaussian(4.0, GridConfig{4000})) ==
        Catch::Approx(0.25).margin(1e-4));
  // scaling oracle: w -> 2w halves the score, quarters the information
  NoiseDensity d = analytic_gaussian(1.0, GridConfig{4000});
  CHECK(fisher_information(rescale(d, 2.0)) == Catch::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("fisher rejects negative densities") {
  Grid g = Grid::make(-1.0, 1.0, 64);
  CHECK_THROWS_AS(NoiseDensity::from_values(g, std::vector<double>(64, -1.0)),
                  DegenerateDensity);
}

TEST_CASE("quality functional") {
  NoiseDensity normal = analytic_gaussian(1.0, GridConfig{4000});
  CHECK(quality(normal, QualityFn::quadratic()) == Catch::Approx(1.0).margin(1e-6));
  CHECK(quality(normal, QualityFn::zero()) == 0.0);

  // quadrature oracle for the well ground state with quadratic g
  const double oracle = oracles::simpson(
      [](double w) {
        const double c = std::cos(M_PI * w / 2.0);
        return w * w * c * c;
      },
      -1.0, 1.0);
  CHECK(oracle == Catch::Approx(oracles::kWellQuadraticQuality).epsilon(1e-12));
  NoiseDensity well = analytic_square_well(1.0, 1, GridConfig{4000});
  CHECK(quality(well, QualityFn::quadratic()) ==
        Catch::Approx(oracle).margin(1e-5));
}

TEST_CASE("quantile endpoints, symmetry, and the inverse-normal oracle") {
  NoiseDensity d = analytic_gaussian(1.0, GridConfig{4000});
  CHECK(d.quantile(0.0) == d.grid().lo);
  CHECK(d.quantile(1.0) == d.grid().hi);
  CHECK(std::abs(d.quantile(0.5)) <= d.grid().h);
  CHECK(oracles::inverse_normal_cdf(0.8413) ==
        Catch::Approx(oracles::kInverseNormal08413).margin(1e-12));
  CHECK(d.quantile(0.8413) ==
        Catch::Approx(oracles::kInverseNormal08413).margin(1e-3));
  CHECK_THROWS_AS(d.quantile(-0.01), OutOfRange);
  CHECK_THROWS_AS(d.quantile(1.01), OutOfRange);
}

TEST_CASE("quantile of cdf at nodes is the identity within h") {
  NoiseDensity d = analytic_square_well(1.0, 1, GridConfig{501});
  for (int i = 0; i < d.grid().n; i += 25) {
    const double c = d.cdf()[static_cast<size_t>(i) + 1];
    CHECK(d.quantile(c) == Catch::Approx(d.grid().node(i)).margin(d.grid().h));
  }
}

TEST_CASE("analytic well density: peak and walls") {
  // odd node count puts a node exactly at w = 0
  NoiseDensity d = analytic_square_well(1.0, 1, GridConfig{4001});
  CHECK(d.p()[2000] == Catch::Approx(1.0).margin(1e-9));
  CHECK(d.p().front() == Catch::Approx(0.0).margin(1e-5));
  CHECK(d.p().back() == Catch::Approx(0.0).margin(1e-5));
}

TEST_CASE("analytic gaussian requires a wide enough box") {
  CHECK_THROWS_AS(analytic_gaussian(1.0, GridConfig{4000}, 5.0), DomainTooSmall);
  CHECK(quality(analytic_gaussian(0.25, GridConfig{4000}), QualityFn::quadratic()) ==
        Catch::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("normalization holds for randomized densities") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 64 + static_cast<int>(rng() % 400);
    Grid g = Grid::make(-2.0, 1.5, n);
    std::vector<double> p(static_cast<size_t>(n));
    for (double& v : p) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    NoiseDensity d = NoiseDensity::from_values(g, std::move(p));
    CHECK(trapezoid_zero_ends(g, d.p()) == Catch::Approx(1.0).margin(1e-10));
    CHECK(d.cdf().front() == 0.0);
    CHECK(d.cdf().back() == 1.0);
    for (size_t k = 1; k < d.cdf().size(); ++k) CHECK(d.cdf()[k] >= d.cdf()[k - 1]);
  }
}

TEST_CASE("fisher and quality scaling laws") {
  // J scales as 1/s^2, quadratic quality as s^2, the product is invariant
  NoiseDensity base = analytic_square_well(1.0, 1, GridConfig{4000});
  const double j0 = fisher_information(base);
  const double q0 = quality(base, QualityFn::quadratic());
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const double s = 0.25 + 4.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    NoiseDensity scaled = rescale(base, s);
    const double j = fisher_information(scaled);
    const double q = quality(scaled, QualityFn::quadratic());
    CHECK(j == Catch::Approx(j0 / (s * s)).epsilon(1e-3));
    CHECK(q == Catch::Approx(q0 * s * s).epsilon(1e-6));
    CHECK(j * q == Catch::Approx(j0 * q0).epsilon(1e-3));
  }
}

TEST_CASE("grid convergence of the well fisher information is second order") {
  double prev_err = 0.0;
  for (int n : {1000, 2000, 4000}) {
    const double err =
        std::abs(fisher_information(analytic_square_well(1.0, 1, GridConfig{n})) -
                 oracles::kPiSq);
    if (prev_err > 0.0) {
      const double ratio = prev_err / err;
      CHECK(ratio > 3.5);
      CHECK(ratio < 4.5);
    }
    prev_err = err;
  }
}
