#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fisher_noise/density.hpp"
#include "fisher_noise/errors.hpp"
#include "fisher_noise/problem.hpp"
#include "fisher_noise/solver.hpp"

namespace fisher_noise {

struct DesignDiagnostics {
  int bisection_iters = 0;
  double eig_residual = 0.0;
  double boundary_mass = 0.0;  // max density value at the two edge nodes
  // (beta, quality) pairs of the multiplier search, in evaluation order.
  // Kept in memory for inspection; not serialized.
  std::vector<std::pair<double, double>> beta_trace;
};

struct DesignResult {
  NoiseDensity density;
  double fisher = 0.0;
  double quality = 0.0;
  double beta = 0.0;  // coefficient of g in the potential v = beta*g/4
  double mu = 0.0;    // -4 * ground eigenvalue
  bool constraint_active = false;
  DesignDiagnostics diagnostics;
  QualityFn g = QualityFn::zero();
};

struct FrontierPoint {
  double rho = 0.0;
  double fisher = 0.0;
  double quality = 0.0;
  double product = 0.0;
};

struct PrincipleCheck {
  double product = 0.0;
  bool satisfied = false;
};

namespace detail {

struct GroundSolve {
  NoiseDensity density;
  double quality_value;
  double eigenvalue;
  double residual;
};

inline GroundSolve solve_ground(const Grid& grid, const QualityFn& g, double beta) {
  PotentialGrid pot = PotentialGrid::from_fn(
      grid, [&](double w) { return 0.25 * beta * g(w); });
  TridiagonalOperator op = assemble(grid, pot);
  EigenPair pair = ground_state(op);
  NoiseDensity d = density_from_wavefunction(pair.eigenvector);
  const double q = quality(d, g);
  return GroundSolve{std::move(d), q, pair.eigenvalue, pair.residual_norm};
}

inline double edge_mass(const NoiseDensity& d) {
  return std::max(d.p().front(), d.p().back());
}

inline DesignResult make_result(GroundSolve s, const QualityFn& g, double beta,
                                bool active, int iters,
                                std::vector<std::pair<double, double>> trace) {
  DesignResult r{std::move(s.density),
                 0.0,
                 s.quality_value,
                 beta,
                 -4.0 * s.eigenvalue,
                 active,
                 DesignDiagnostics{},
                 g};
  r.fisher = fisher_information(r.density);
  r.diagnostics.bisection_iters = iters;
  r.diagnostics.eig_residual = s.residual;
  r.diagnostics.boundary_mass = edge_mass(r.density);
  r.diagnostics.beta_trace = std::move(trace);
  return r;
}

inline DesignResult design_on_domain(double lo, double hi, const QualityFn& g,
                                     double rho, const GridConfig& cfg) {
  Grid grid = Grid::make(lo, hi, cfg.n_points);

  if (g.is_zero()) {
    GroundSolve s = solve_ground(grid, g, 0.0);
    return make_result(std::move(s), g, 0.0, false, 0, {});
  }

  std::vector<std::pair<double, double>> trace;
  GroundSolve free = solve_ground(grid, g, 0.0);
  trace.emplace_back(0.0, free.quality_value);
  if (free.quality_value <= rho)
    return make_result(std::move(free), g, 0.0, false, 0, std::move(trace));

  // Q(beta) is strictly decreasing, so bracket by doubling and bisect.
  double beta_lo = 0.0;
  double beta_hi = 1.0;
  GroundSolve s = solve_ground(grid, g, beta_hi);
  trace.emplace_back(beta_hi, s.quality_value);
  int doublings = 0;
  while (s.quality_value >= rho) {
    if (++doublings > 60)
      throw BudgetUnreachable(
          "quality still above rho after 60 doublings of beta; rho is below "
          "the infimum quality achievable on this grid");
    beta_lo = beta_hi;
    beta_hi *= 2.0;
    s = solve_ground(grid, g, beta_hi);
    trace.emplace_back(beta_hi, s.quality_value);
  }

  const double tol = 0.5e-6 * std::max(1.0, rho);
  int iters = 0;
  double beta = beta_hi;
  while (std::abs(s.quality_value - rho) > tol) {
    if (++iters > 200)
      throw NoConvergence("multiplier bisection exceeded 200 iterations");
    beta = 0.5 * (beta_lo + beta_hi);
    s = solve_ground(grid, g, beta);
    trace.emplace_back(beta, s.quality_value);
    if (s.quality_value > rho)
      beta_lo = beta;
    else
      beta_hi = beta;
  }
  return make_result(std::move(s), g, beta, true, iters, std::move(trace));
}

}  // namespace detail

// Solver box of a problem. Bounded supports pass through; fixed truncations
// give (-L, L). Auto truncation with quadratic g uses L = 10*sqrt(rho), which
// puts the optimal Gaussian's discarded tail mass below 1e-20; for other g
// the box doubles from sqrt(rho) until the designed density's edge values
// fall below boundary_mass_tol.
inline std::pair<double, double> effective_domain(const DesignProblem& problem) {
  detail::check_problem_invariants(problem);
  const SupportSpec& s = problem.support;
  if (s.kind == SupportSpec::Kind::Bounded) return {s.lo, s.hi};
  if (s.truncation.kind == TruncationPolicy::Kind::Fixed)
    return {-s.truncation.half_width, s.truncation.half_width};
  if (problem.g.is_quadratic()) {
    const double L = 10.0 * std::sqrt(problem.rho);
    return {-L, L};
  }
  double L = std::sqrt(problem.rho);
  for (int it = 0; it < 20; ++it) {
    DesignResult r = detail::design_on_domain(-L, L, problem.g, problem.rho,
                                              problem.grid);
    if (r.diagnostics.boundary_mass < s.truncation.boundary_mass_tol)
      return {-L, L};
    L *= 2.0;
  }
  throw NonConvergentTruncation(
      "auto truncation did not settle within 20 doublings");
}

inline ValidatedProblem validate(const DesignProblem& problem) {
  auto [lo, hi] = effective_domain(problem);
  return ValidatedProblem(problem, lo, hi);
}

// Validating an already-validated problem returns it unchanged.
inline const ValidatedProblem& validate(const ValidatedProblem& problem) {
  return problem;
}

// Solve the constrained design problem: minimize Fisher information subject
// to quality <= rho. The optimality condition is the Dirichlet eigenproblem
// -psi'' + (beta g / 4) psi = E psi in psi = sqrt(p); the quality multiplier
// beta is found by bisection on the strictly decreasing map beta -> quality,
// and mu = -4 E_0 is the normalization multiplier.
inline DesignResult design(const ValidatedProblem& vp) {
  return detail::design_on_domain(vp.domain_lo(), vp.domain_hi(),
                                  vp.g(), vp.rho(), vp.grid_config());
}

// One design per budget, in input order. Auto-truncated domains are
// re-resolved for every rho.
inline std::vector<FrontierPoint> frontier(const ValidatedProblem& tmpl,
                                           const std::vector<double>& rhos) {
  if (tmpl.g().is_zero())
    throw NotApplicable("frontier needs a non-zero quality function");
  if (rhos.empty()) throw InvalidBudget("frontier needs at least one rho");
  double prev = 0.0;
  for (double r : rhos) {
    if (!(r > prev))
      throw InvalidBudget("frontier budgets must be positive and strictly increasing");
    prev = r;
  }
  std::vector<FrontierPoint> points;
  points.reserve(rhos.size());
  for (double r : rhos) {
    try {
      DesignProblem p = tmpl.problem();
      p.rho = r;
      DesignResult res = design(validate(p));
      points.push_back({r, res.fisher, res.quality, res.fisher * res.quality});
    } catch (const Error& e) {
      throw Error(e.code(), "design failed at rho=" + std::to_string(r) +
                                ": " + e.what());
    }
  }
  return points;
}

// The trade-off product J*Q with the lower-bound test J*Q >= 1 (proved for
// quadratic g only; anything else is out of the theorem's reach).
inline PrincipleCheck check_principle(const DesignResult& result) {
  if (!result.g.is_quadratic())
    throw NotApplicable("the privacy principle is stated for quadratic g only");
  const double product = result.fisher * result.quality;
  return PrincipleCheck{product, product >= 1.0 - 1e-9};
}

}  // namespace fisher_noise
