#pragma once

#include <cmath>
#include <utility>

#include "fisher_noise/errors.hpp"
#include "fisher_noise/quality.hpp"

namespace fisher_noise {

// How an unbounded support is reduced to a finite solver box [-L, L].
struct TruncationPolicy {
  enum class Kind { Fixed, Auto };

  Kind kind = Kind::Fixed;
  double half_width = 0.0;        // Fixed
  double boundary_mass_tol = 0.0; // Auto

  static TruncationPolicy fixed(double half_width) {
    TruncationPolicy t;
    t.kind = Kind::Fixed;
    t.half_width = half_width;
    return t;
  }

  static TruncationPolicy automatic(double boundary_mass_tol) {
    TruncationPolicy t;
    t.kind = Kind::Auto;
    t.boundary_mass_tol = boundary_mass_tol;
    return t;
  }
};

// Support set of the noise: a bounded interval, or the real line reduced to
// a finite symmetric box by a truncation policy.
struct SupportSpec {
  enum class Kind { Bounded, RealLine };

  Kind kind = Kind::Bounded;
  double lo = 0.0;
  double hi = 0.0;
  TruncationPolicy truncation;

  static SupportSpec bounded(double lo, double hi) {
    SupportSpec s;
    s.kind = Kind::Bounded;
    s.lo = lo;
    s.hi = hi;
    return s;
  }

  static SupportSpec real_line(TruncationPolicy truncation) {
    SupportSpec s;
    s.kind = Kind::RealLine;
    s.truncation = truncation;
    return s;
  }
};

struct GridConfig {
  int n_points = 4000;  // interior nodes; uniform grid, psi = 0 at endpoints
};

// Full input of the design problem: minimize the Fisher information of the
// noise over densities on the support, subject to quality <= rho.
struct DesignProblem {
  SupportSpec support;
  QualityFn g = QualityFn::zero();
  double rho = 0.0;  // ignored when g is Zero
  GridConfig grid;
};

namespace detail {

inline void check_problem_invariants(const DesignProblem& p) {
  const SupportSpec& s = p.support;
  if (s.kind == SupportSpec::Kind::Bounded) {
    if (!(std::isfinite(s.lo) && std::isfinite(s.hi)))
      throw InvalidSupport("bounded support must have finite endpoints");
    if (!(s.lo < s.hi)) throw InvalidSupport("bounded support needs lo < hi");
  } else {
    const TruncationPolicy& t = s.truncation;
    if (t.kind == TruncationPolicy::Kind::Fixed) {
      if (!(t.half_width > 0.0) || !std::isfinite(t.half_width))
        throw InvalidSupport("fixed truncation needs half_width > 0");
    } else {
      if (!(t.boundary_mass_tol > 0.0) || !(t.boundary_mass_tol < 1e-3))
        throw InvalidSupport("auto truncation needs 0 < boundary_mass_tol < 1e-3");
      if (p.g.is_zero())
        throw InvalidSupport(
            "real-line support with auto truncation requires a non-zero "
            "quality function (the problem has no length scale otherwise)");
    }
  }
  if (!p.g.is_zero()) {
    if (!(p.rho > 0.0) || !std::isfinite(p.rho))
      throw InvalidBudget("rho must be positive and finite for a non-zero quality function");
  }
  if (p.grid.n_points < 64)
    throw GridTooCoarse("grid needs at least 64 interior nodes");
}

}  // namespace detail

// A DesignProblem whose invariants have been checked and whose solver box
// has been resolved. Constructed only by validate() (designer.hpp).
class ValidatedProblem {
 public:
  const DesignProblem& problem() const { return problem_; }
  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }
  const QualityFn& g() const { return problem_.g; }
  double rho() const { return problem_.rho; }
  const GridConfig& grid_config() const { return problem_.grid; }

 private:
  friend ValidatedProblem validate(const DesignProblem&);

  ValidatedProblem(DesignProblem p, double lo, double hi)
      : problem_(std::move(p)), lo_(lo), hi_(hi) {}

  DesignProblem problem_;
  double lo_;
  double hi_;
};

}  // namespace fisher_noise
