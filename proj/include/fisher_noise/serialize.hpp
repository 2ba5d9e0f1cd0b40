#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fisher_noise/density.hpp"
#include "fisher_noise/designer.hpp"
#include "fisher_noise/errors.hpp"
#include "fisher_noise/mechanism.hpp"
#include "fisher_noise/problem.hpp"

namespace fisher_noise {

using json = nlohmann::json;

// 17 significant digits: exact double round-trip, comfortably past the
// 12-digit file-format floor.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- DesignProblem <-> JSON -------------------------------------------------
// {"support": {"bounded": [lo, hi]} | {"real_line": {"fixed": L} | {"auto": tol}},
//  "g": "zero" | "quadratic" | {"even_power": k} | {"even_polynomial": [c2, c4, ...]},
//  "rho": number, "grid": {"n_points": int}}

inline json problem_to_json(const DesignProblem& p) {
  json j;
  if (p.support.kind == SupportSpec::Kind::Bounded) {
    j["support"] = {{"bounded", {p.support.lo, p.support.hi}}};
  } else if (p.support.truncation.kind == TruncationPolicy::Kind::Fixed) {
    j["support"] = {{"real_line", {{"fixed", p.support.truncation.half_width}}}};
  } else {
    j["support"] = {{"real_line", {{"auto", p.support.truncation.boundary_mass_tol}}}};
  }
  switch (p.g.kind()) {
    case QualityFn::Kind::Zero:
      j["g"] = "zero";
      break;
    case QualityFn::Kind::Quadratic:
      j["g"] = "quadratic";
      break;
    case QualityFn::Kind::EvenPower:
      j["g"] = {{"even_power", p.g.power()}};
      break;
    case QualityFn::Kind::EvenPolynomial:
      j["g"] = {{"even_polynomial", p.g.coeffs()}};
      break;
  }
  j["rho"] = p.rho;
  j["grid"] = {{"n_points", p.grid.n_points}};
  return j;
}

inline DesignProblem problem_from_json(const json& j) {
  try {
    DesignProblem p;
    const json& sup = j.at("support");
    if (sup.contains("bounded")) {
      const json& b = sup.at("bounded");
      if (!b.is_array() || b.size() != 2)
        throw ParseError("support.bounded must be [lo, hi]");
      p.support = SupportSpec::bounded(b[0].get<double>(), b[1].get<double>());
    } else if (sup.contains("real_line")) {
      const json& rl = sup.at("real_line");
      if (rl.contains("fixed"))
        p.support = SupportSpec::real_line(
            TruncationPolicy::fixed(rl.at("fixed").get<double>()));
      else if (rl.contains("auto"))
        p.support = SupportSpec::real_line(
            TruncationPolicy::automatic(rl.at("auto").get<double>()));
      else
        throw ParseError("support.real_line needs \"fixed\" or \"auto\"");
    } else {
      throw ParseError("support needs \"bounded\" or \"real_line\"");
    }

    const json& g = j.at("g");
    if (g.is_string()) {
      const std::string name = g.get<std::string>();
      if (name == "zero")
        p.g = QualityFn::zero();
      else if (name == "quadratic")
        p.g = QualityFn::quadratic();
      else
        throw ParseError("unknown quality function \"" + name + "\"");
    } else if (g.contains("even_power")) {
      p.g = QualityFn::even_power(g.at("even_power").get<int>());
    } else if (g.contains("even_polynomial")) {
      p.g = QualityFn::even_polynomial(
          g.at("even_polynomial").get<std::vector<double>>());
    } else {
      throw ParseError("unrecognized quality function");
    }

    p.rho = j.value("rho", 0.0);
    p.grid.n_points = j.at("grid").at("n_points").get<int>();
    return p;
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed problem JSON: ") + e.what());
  }
}

// --- NoiseDensity -----------------------------------------------------------

inline json density_to_json(const NoiseDensity& d) {
  json j;
  j["grid"] = {{"lo", d.grid().lo}, {"hi", d.grid().hi}, {"n", d.grid().n}};
  j["p"] = d.p();
  return j;
}

inline NoiseDensity density_from_json(const json& j) {
  try {
    Grid g = Grid::make(j.at("grid").at("lo").get<double>(),
                        j.at("grid").at("hi").get<double>(),
                        j.at("grid").at("n").get<int>());
    return NoiseDensity::from_values(g, j.at("p").get<std::vector<double>>());
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed density JSON: ") + e.what());
  }
}

// CSV with header "w,p,cdf", one row per interior node.
inline void density_to_csv(std::ostream& os, const NoiseDensity& d) {
  os << "w,p,cdf\n";
  for (int i = 0; i < d.grid().n; ++i) {
    os << format_double(d.grid().node(i)) << ','
       << format_double(d.p()[static_cast<size_t>(i)]) << ','
       << format_double(d.cdf()[static_cast<size_t>(i) + 1]) << '\n';
  }
}

// --- DesignResult / frontier / attack ---------------------------------------

inline json design_result_to_json(const DesignResult& r) {
  json j;
  j["fisher"] = r.fisher;
  j["quality"] = r.quality;
  j["beta"] = r.beta;
  j["mu"] = r.mu;
  j["constraint_active"] = r.constraint_active;
  j["diagnostics"] = {{"bisection_iters", r.diagnostics.bisection_iters},
                      {"eig_residual", r.diagnostics.eig_residual},
                      {"boundary_mass", r.diagnostics.boundary_mass}};
  j["density"] = density_to_json(r.density);
  return j;
}

inline void frontier_to_csv(std::ostream& os,
                            const std::vector<FrontierPoint>& points) {
  os << "rho,fisher,quality,product\n";
  for (const FrontierPoint& p : points) {
    os << format_double(p.rho) << ',' << format_double(p.fisher) << ','
       << format_double(p.quality) << ',' << format_double(p.product) << '\n';
  }
}

inline void samples_to_csv(std::ostream& os, const std::vector<double>& w) {
  os << "w\n";
  for (double v : w) os << format_double(v) << '\n';
}

inline json attack_report_to_json(const AttackReport& r) {
  json j;
  j["trials"] = r.trials;
  j["empirical_mse"] = r.empirical_mse;
  j["cramer_rao_floor"] = r.cramer_rao_floor;
  j["empirical_bias"] = r.empirical_bias;
  j["seed"] = r.seed;
  return j;
}

}  // namespace fisher_noise
