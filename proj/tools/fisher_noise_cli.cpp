// Command-line front end: design optimal noise, sweep privacy-utility
// frontiers, sample designed densities, run Monte-Carlo attacks, and verify
// the closed-form oracles. Emits JSON/CSV artifacts suitable for plotting.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fisher_noise/fisher_noise.hpp"

namespace fn = fisher_noise;
namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 computational failure, 2 usage/input error.
int exit_code_for(const fn::Error& e) {
  const std::string& c = e.code();
  if (c == "ParseError" || c == "IoError" || c == "InvalidSupport" ||
      c == "InvalidBudget" || c == "InvalidQuality" || c == "GridTooCoarse" ||
      c == "DomainTooSmall" || c == "OutOfRange" || c == "IndexOutOfRange")
    return 2;
  return 1;
}

void print_error(const std::string& code, const std::string& detail) {
  fn::json j;
  j["error"] = code;
  j["detail"] = detail;
  std::cerr << j.dump() << '\n';
}

fn::DesignProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fn::IoError("cannot open problem file: " + path);
  fn::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw fn::ParseError(std::string("problem file is not valid JSON: ") + ex.what());
  }
  fn::DesignProblem p = fn::problem_from_json(j);
  if (const char* env = std::getenv("FISHER_NOISE_GRID_N")) {
    try {
      p.grid.n_points = std::stoi(env);
    } catch (const std::exception&) {
      throw fn::ParseError("FISHER_NOISE_GRID_N must be an integer");
    }
  }
  return p;
}

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw fn::IoError("cannot open output file: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw fn::IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw fn::IoError("rename failed: " + path.string() + " (" + ec.message() + ")");
}

fs::path density_csv_path(const fs::path& out) {
  fs::path p = out;
  if (p.extension() == ".json")
    p.replace_extension(".csv");
  else
    p += ".csv";
  return p;
}

std::vector<double> parse_rhos(const std::string& csv) {
  std::vector<double> rhos;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t pos = 0;
      double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      rhos.push_back(v);
    } catch (const std::exception&) {
      throw fn::ParseError("--rhos must be a comma-separated list of reals");
    }
  }
  if (rhos.empty()) throw fn::ParseError("--rhos is empty");
  return rhos;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

int run_design(const std::string& problem_path, const std::string& out_path) {
  fn::DesignProblem p = load_problem(problem_path);
  fn::DesignResult r = fn::design(fn::validate(p));
  atomic_write(out_path, fn::design_result_to_json(r).dump(2) + "\n");
  std::ostringstream csv;
  fn::density_to_csv(csv, r.density);
  atomic_write(density_csv_path(out_path), csv.str());
  std::cout << "fisher=" << num(r.fisher) << " quality=" << num(r.quality)
            << " product=" << num(r.fisher * r.quality) << '\n';
  return 0;
}

int run_frontier(const std::string& problem_path, const std::string& out_path,
                 const std::string& rhos_csv) {
  fn::DesignProblem p = load_problem(problem_path);
  std::vector<double> rhos = parse_rhos(rhos_csv);
  std::vector<fn::FrontierPoint> points = fn::frontier(fn::validate(p), rhos);
  std::ostringstream csv;
  fn::frontier_to_csv(csv, points);
  atomic_write(out_path, csv.str());
  return 0;
}

int run_sample(const std::string& problem_path, const std::string& out_path,
               long count, std::uint64_t seed) {
  fn::DesignProblem p = load_problem(problem_path);
  fn::DesignResult r = fn::design(fn::validate(p));
  std::vector<double> w = fn::sample(r.density, seed, count);
  std::ostringstream csv;
  fn::samples_to_csv(csv, w);
  atomic_write(out_path, csv.str());
  return 0;
}

int run_attack(const std::string& problem_path, const std::string& out_path,
               double x_true, long trials, std::uint64_t seed) {
  fn::DesignProblem p = load_problem(problem_path);
  fn::DesignResult r = fn::design(fn::validate(p));
  fn::AttackReport rep = fn::monte_carlo_attack(r.density, x_true, trials, seed);
  atomic_write(out_path, fn::attack_report_to_json(rep).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// verify: closed-form oracle suite. Square wells a in {1, 2} and Gaussians
// rho in {0.5, 1, 4}, each designed at the configured grid and compared to
// the analytic values. Prints one PASS/FAIL line per check; exit 0 iff all
// pass.

struct VerifyState {
  bool all_ok = true;

  void check(const std::string& name, double observed, double expected,
             double rel_tol, const std::string& note = "") {
    const double denom = std::max(std::abs(expected), 1e-300);
    const double rel = std::abs(observed - expected) / denom;
    const bool ok = rel <= rel_tol;
    all_ok = all_ok && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ' ' << num(observed)
              << " expected " << num(expected) << " tol " << num(rel_tol)
              << " rel";
    if (!ok) std::cout << " (relative error " << num(rel) << ")";
    if (!note.empty()) std::cout << "; " << note;
    std::cout << '\n';
  }

  void check_upper(const std::string& name, double observed, double bound) {
    const bool ok = observed <= bound;
    all_ok = all_ok && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << name << ' ' << num(observed)
              << " <= " << num(bound) << '\n';
  }
};

int run_verify() {
  int n_points = 4000;
  if (const char* env = std::getenv("FISHER_NOISE_GRID_N")) {
    try {
      n_points = std::stoi(env);
    } catch (const std::exception&) {
      throw fn::ParseError("FISHER_NOISE_GRID_N must be an integer");
    }
  }
  const double pi2 = M_PI * M_PI;
  VerifyState v;

  for (double a : {1.0, 2.0}) {
    fn::DesignProblem p;
    p.support = fn::SupportSpec::bounded(-a, a);
    p.g = fn::QualityFn::zero();
    p.grid.n_points = n_points;
    fn::DesignResult r = fn::design(fn::validate(p));
    const std::string tag = "well a=" + num(a);
    std::string note;
    if (a != 1.0)
      note = "matches pi^2/a^2; the alternative scaling pi^2/a = " +
             num(pi2 / a) + " is excluded";
    v.check(tag + " fisher", r.fisher, pi2 / (a * a), 1e-2, note);

    double max_err = 0.0;
    for (int i = 0; i < r.density.grid().n; ++i) {
      const double w = r.density.grid().node(i);
      const double s = std::sin(M_PI * (w + a) / (2.0 * a));
      max_err = std::max(max_err, std::abs(r.density.p()[static_cast<size_t>(i)] - s * s / a));
    }
    v.check_upper(tag + " density max pointwise error", max_err, 1e-4);
  }

  for (double rho : {0.5, 1.0, 4.0}) {
    fn::DesignProblem p;
    p.support = fn::SupportSpec::real_line(fn::TruncationPolicy::automatic(1e-6));
    p.g = fn::QualityFn::quadratic();
    p.rho = rho;
    p.grid.n_points = n_points;
    fn::DesignResult r = fn::design(fn::validate(p));
    const std::string tag = "gaussian rho=" + num(rho);
    v.check(tag + " fisher", r.fisher, 1.0 / rho, 1e-3);
    v.check(tag + " quality", r.quality, rho, 2e-6);
    v.check(tag + " product", r.fisher * r.quality, 1.0, 1e-4);
  }

  return v.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal privacy-preserving additive noise via Fisher information minimization"};
  app.require_subcommand(1);

  std::string problem_path, out_path, rhos_csv;
  long count = 10000;
  long trials = 100000;
  std::uint64_t seed = 42;
  double x_true = 0.0;

  CLI::App* design = app.add_subcommand("design", "solve one design problem");
  design->add_option("--problem", problem_path, "problem JSON")->required();
  design->add_option("--out", out_path, "output JSON path (density CSV written alongside)")->required();

  CLI::App* frontier = app.add_subcommand("frontier", "sweep budgets");
  frontier->add_option("--problem", problem_path, "problem JSON")->required();
  frontier->add_option("--out", out_path, "output CSV path")->required();
  frontier->add_option("--rhos", rhos_csv, "comma-separated budgets")->required();

  CLI::App* sample = app.add_subcommand("sample", "draw noise samples");
  sample->add_option("--problem", problem_path, "problem JSON")->required();
  sample->add_option("--out", out_path, "output CSV path")->required();
  sample->add_option("--count", count, "number of samples");
  sample->add_option("--seed", seed, "rng seed");

  CLI::App* attack = app.add_subcommand("attack", "Monte-Carlo MLE attack");
  attack->add_option("--problem", problem_path, "problem JSON")->required();
  attack->add_option("--out", out_path, "report JSON path")->required();
  attack->add_option("--x", x_true, "true value of the private scalar");
  attack->add_option("--trials", trials, "number of attack trials");
  attack->add_option("--seed", seed, "rng seed");

  CLI::App* verify = app.add_subcommand("verify", "run the closed-form oracle checks");
  (void)verify;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (design->parsed()) return run_design(problem_path, out_path);
    if (frontier->parsed()) return run_frontier(problem_path, out_path, rhos_csv);
    if (sample->parsed()) return run_sample(problem_path, out_path, count, seed);
    if (attack->parsed()) return run_attack(problem_path, out_path, x_true, trials, seed);
    return run_verify();
  } catch (const fn::Error& e) {
    print_error(e.code(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    print_error("Internal", e.what());
    return 1;
  }
}
