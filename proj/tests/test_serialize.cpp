#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>
#include <string>

#include "fisher_noise/serialize.hpp"
#include "oracles.hpp"

using namespace fisher_noise;

namespace {

DesignProblem random_problem(std::mt19937_64& rng) {
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  DesignProblem p;
  switch (rng() % 3) {
    case 0: {
      const double lo = uniform(-5.0, 0.0);
      p.support = SupportSpec::bounded(lo, lo + uniform(0.1, 8.0));
      break;
    }
    case 1:
      p.support = SupportSpec::real_line(TruncationPolicy::fixed(uniform(0.5, 20.0)));
      break;
    default:
      p.support = SupportSpec::real_line(TruncationPolicy::automatic(uniform(1e-8, 9e-4)));
      break;
  }
  switch (rng() % 4) {
    case 0: p.g = QualityFn::zero(); break;
    case 1: p.g = QualityFn::quadratic(); break;
    case 2: p.g = QualityFn::even_power(2 + 2 * static_cast<int>(rng() % 3)); break;
    default: p.g = QualityFn::even_polynomial({uniform(0.1, 2.0), uniform(0.0, 1.0)}); break;
  }
  // auto truncation needs a quality signal
  if (p.support.kind == SupportSpec::Kind::RealLine &&
      p.support.truncation.kind == TruncationPolicy::Kind::Auto && p.g.is_zero())
    p.g = QualityFn::quadratic();
  p.rho = uniform(0.01, 10.0);
  p.grid.n_points = 64 + static_cast<int>(rng() % 8000);
  return p;
}

bool problems_equal(const DesignProblem& a, const DesignProblem& b) {
  return problem_to_json(a) == problem_to_json(b);
}

}  // namespace

TEST_CASE("problem json round-trip (property)") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    DesignProblem p = random_problem(rng);
    DesignProblem back = problem_from_json(problem_to_json(p));
    CHECK(problems_equal(p, back));
  }
}

TEST_CASE("problem json matches the documented schema") {
  json j = json::parse(R"({
    "support": {"real_line": {"auto": 1e-06}},
    "g": "quadratic",
    "rho": 1.0,
    "grid": {"n_points": 4000}
  })");
  DesignProblem p = problem_from_json(j);
  CHECK(p.support.kind == SupportSpec::Kind::RealLine);
  CHECK(p.g.is_quadratic());
  CHECK(p.rho == 1.0);
  CHECK(p.grid.n_points == 4000);

  json jb = json::parse(R"({
    "support": {"bounded": [-1.0, 1.0]},
    "g": {"even_polynomial": [1.0, 0.25]},
    "rho": 0.5,
    "grid": {"n_points": 128}
  })");
  DesignProblem pb = problem_from_json(jb);
  CHECK(pb.support.lo == -1.0);
  CHECK(pb.g.coeffs() == std::vector<double>{1.0, 0.25});
}

TEST_CASE("malformed problem json is rejected") {
  CHECK_THROWS_AS(problem_from_json(json::parse(R"({"g": "zero"})")), ParseError);
  CHECK_THROWS_AS(problem_from_json(json::parse(
                      R"({"support": {"circle": 1}, "g": "zero", "rho": 1, "grid": {"n_points": 64}})")),
                  ParseError);
  CHECK_THROWS_AS(problem_from_json(json::parse(
                      R"({"support": {"bounded": [0]}, "g": "zero", "rho": 1, "grid": {"n_points": 64}})")),
                  ParseError);
  CHECK_THROWS_AS(problem_from_json(json::parse(
                      R"({"support": {"bounded": [-1, 1]}, "g": "cubic", "rho": 1, "grid": {"n_points": 64}})")),
                  ParseError);
}

TEST_CASE("density csv format") {
  NoiseDensity d = analytic_square_well(1.0, 1, GridConfig{64});
  std::ostringstream os;
  density_to_csv(os, d);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "w,p,cdf");
  int rows = 0;
  std::string line;
  double prev_w = -2.0, prev_c = -1.0;
  while (std::getline(is, line)) {
    ++rows;
    std::istringstream ls(line);
    double w, p, c;
    char comma;
    ls >> w >> comma >> p >> comma >> c;
    CHECK(w > prev_w);
    CHECK(p >= 0.0);
    CHECK(c >= prev_c);
    prev_w = w;
    prev_c = c;
  }
  CHECK(rows == 64);
  // >= 12 significant digits survive a parse round-trip (construction
  // renormalizes, which may move the last ulp)
  NoiseDensity dj = density_from_json(density_to_json(d));
  for (int i = 0; i < 64; ++i)
    CHECK(dj.p()[static_cast<size_t>(i)] ==
          Catch::Approx(d.p()[static_cast<size_t>(i)]).epsilon(1e-14).margin(1e-300));
}

TEST_CASE("design result json carries the documented keys") {
  DesignProblem p;
  p.support = SupportSpec::bounded(-1.0, 1.0);
  p.g = QualityFn::zero();
  p.grid.n_points = 200;
  DesignResult r = design(validate(p));
  json j = design_result_to_json(r);
  for (const char* key :
       {"fisher", "quality", "beta", "mu", "constraint_active", "diagnostics", "density"})
    CHECK(j.contains(key));
  for (const char* key : {"bisection_iters", "eig_residual", "boundary_mass"})
    CHECK(j["diagnostics"].contains(key));
  CHECK(j["density"]["grid"]["n"] == 200);

  NoiseDensity round = density_from_json(j["density"]);
  CHECK(fisher_information(round) == Catch::Approx(r.fisher));
}

TEST_CASE("frontier and samples csv headers") {
  std::ostringstream fos;
  frontier_to_csv(fos, {{0.5, 2.0, 0.5, 1.0}});
  CHECK(fos.str().rfind("rho,fisher,quality,product\n", 0) == 0);

  std::ostringstream sos;
  samples_to_csv(sos, {0.25, -0.5});
  CHECK(sos.str() == "w\n0.25\n-0.5\n");
}

TEST_CASE("attack report json") {
  AttackReport r{100000, 1.002, 0.998, -0.0004, 42};
  json j = attack_report_to_json(r);
  CHECK(j["trials"] == 100000);
  CHECK(j["seed"] == 42);
  CHECK(j["empirical_mse"] == 1.002);
  CHECK(j["cramer_rao_floor"] == 0.998);
  CHECK(j["empirical_bias"] == -0.0004);
}
