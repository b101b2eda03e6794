// Command-line driver: solve a CARE/Lyapunov problem from a manifest or a
// synthetic generator, write the factors and a JSON Lines convergence log,
// or compare the two algorithms with --bench.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "lrcare/bench.hpp"
#include "lrcare/generators.hpp"
#include "lrcare/manifest.hpp"
#include "lrcare/matrix_market.hpp"
#include "lrcare/oracle.hpp"
#include "lrcare/run.hpp"

namespace fs = std::filesystem;
using namespace lrcare;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kBreakdown = 3, kNotConverged = 4 };

struct Options {
  std::string manifest;
  std::string algorithm;
  std::string shifts_file;
  std::string strategy;
  Index window = 1;
  Index batch = 0;
  double tol = 0.0;
  Index max_steps = -1;
  bool gain_only = false;
  bool check_invariants = false;
  std::string out = "lrcare_out";
  std::string log;
  bool bench = false;
  Index reps = 1;
  std::uint64_t seed = 1;
  std::string generate;
  Index grid = 32;
  Index n = 100;
  Index m = 1;
  Index p = 1;
  bool mass = false;
  bool complex_data = false;
  bool quiet = false;
};

// Command-line values win over manifest values.
template <typename T>
T pick(const T& cli, const T& unset, const Manifest* man, const char* key,
       T (*convert)(const std::string&)) {
  if (cli != unset) return cli;
  if (man) {
    if (auto v = man->get(key)) return convert(*v);
  }
  return unset;
}

Index to_index(const std::string& s) {
  try {
    return static_cast<Index>(std::stoll(s));
  } catch (const std::exception&) {
    throw ConfigError("expected an integer, got '" + s + "'");
  }
}

double to_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + s + "'");
  }
}

std::string to_string_id(const std::string& s) { return s; }

bool to_bool(const std::string& s) { return s == "true" || s == "1" || s == "yes"; }

CareProblem make_problem(const Options& o, const Manifest* man) {
  if (man) return load_problem(*man);
  if (o.generate.empty())
    throw ConfigError("no problem given: use --manifest or --generate {fd|random}");
  CareProblem base = [&] {
    if (o.generate == "fd") return convection_diffusion_problem(o.grid, o.m, o.p, o.seed);
    if (o.generate == "random")
      return random_stable_problem(o.n, o.m, o.p, o.seed, o.complex_data);
    throw ConfigError("unknown generator '" + o.generate + "'");
  }();
  return o.mass ? with_random_spd_mass(base, o.seed + 1) : base;
}

template <typename Scalar>
int solve(std::shared_ptr<const CareProblem> problem, ShiftStrategy& strategy,
          const RunOptions& options, const fs::path& out, const fs::path& log_path, bool quiet) {
  LinearBackend backend(problem);
  std::ofstream log(log_path);
  if (!log) throw ConfigError("cannot write log " + log_path.string());
  const auto result = run<Scalar>(backend, strategy, options, [&](const ConvergenceRecord& r) {
    log << to_json_line(r) << '\n';
    log.flush();
    if (!quiet)
      std::printf("step %3lld  shifts %2zu  columns %5lld  rel. residual %.3e\n",
                  static_cast<long long>(r.step), r.shifts.size(),
                  static_cast<long long>(r.columns), r.rel_residual);
  });
  save_state(result.state, out);
  const double rel = residual_norm(result.state) / problem->initial_residual_norm();
  std::printf("%s: %s after %lld shifts, relative residual %.3e (%s)\n", to_string(options.algorithm),
              result.converged ? "converged" : "not converged",
              static_cast<long long>(result.state.steps()), rel, out.string().c_str());
  return result.converged ? kOk : kNotConverged;
}

int run_algorithm1(const CareProblem& problem, const std::vector<Shift>& shifts, double tol,
                   const fs::path& out, const fs::path& log_path) {
  const auto sol = solve_via_projected_lyapunov(problem, shifts);
  fs::create_directories(out);
  write_matrix_market_file<cplx>(out / "Z.mtx", sol.z);
  write_matrix_market_file<cplx>(out / "Ytilde.mtx", sol.ytilde);
  write_matrix_market_file<cplx>(out / "R.mtx", sol.residual);
  write_shift_file(out / "shifts.txt", shifts);
  const double rel =
      (sol.residual.adjoint() * sol.residual).norm() / problem.initial_residual_norm();
  ConvergenceRecord rec{1, shifts, rel, 0.0, 0.0, sol.z.cols()};
  std::ofstream(log_path) << to_json_line(rec) << '\n';
  std::printf("algorithm1: %zu shifts, relative residual %.3e\n", shifts.size(), rel);
  return rel <= tol ? kOk : kNotConverged;
}

int bench(const CareProblem& problem, std::vector<Shift> shifts, Index reps, const fs::path& out) {
  const BenchResult result = bench_compare(problem, shifts, reps);
  fs::create_directories(out);
  std::ofstream csv(out / "bench.csv");
  write_bench_csv(csv, result);
  std::printf("%-8s %14s %14s\n", "", "lin. solves", "misc");
  std::printf("%-8s %14.4f %14.4f\n", "basic", result.basic.solve_seconds, result.basic.misc_seconds);
  std::printf("%-8s %14.4f %14.4f\n", "radi", result.radi.solve_seconds, result.radi.misc_seconds);
  std::printf("max relative difference of iterates: %.2e\n", result.max_relative_difference);
  return kOk;
}

// Shifts for the benchmark are computed up front so that their cost is not
// part of the measurement.
std::vector<Shift> precompute_shifts(std::shared_ptr<const CareProblem> problem, Index window,
                                     double tol, Index max_steps) {
  LinearBackend backend(problem);
  ShiftStrategy strategy = ShiftStrategy::residual_projection(window);
  RunOptions options;
  options.tol = tol;
  options.max_steps = max_steps;
  options.algorithm = Algorithm::radi;
  std::vector<Shift> shifts;
  auto collect = [&](const ConvergenceRecord& r) {
    shifts.insert(shifts.end(), r.shifts.begin(), r.shifts.end());
  };
  if (problem->field_is_real())
    run<double>(backend, strategy, options, collect);
  else
    run<cplx>(backend, strategy, options, collect);
  return shifts;
}

int main_impl(int argc, char** argv) {
  Options o;
  CLI::App app{"Low-rank solver for large algebraic Riccati and Lyapunov equations"};
  app.add_option("--manifest", o.manifest, "problem manifest (keys A, B, C, E and solver options)");
  app.add_option("--algorithm", o.algorithm, "basic | radi | algorithm1")
      ->check(CLI::IsMember({"basic", "radi", "algorithm1"}));
  app.add_option("--shifts-file", o.shifts_file, "fixed shift list, one 're im' pair per line");
  app.add_option("--shift-strategy", o.strategy, "fixed | residual-projection")
      ->check(CLI::IsMember({"fixed", "residual-projection"}));
  app.add_option("--window", o.window, "residual factors spanning the projection space");
  app.add_option("--batch", o.batch, "shifts per step");
  app.add_option("--tol", o.tol, "relative residual tolerance");
  app.add_option("--max-steps", o.max_steps, "maximum number of steps");
  app.add_flag("--gain-only", o.gain_only, "keep only R and K (radi)");
  app.add_flag("--check-invariants", o.check_invariants, "verify state invariants every step");
  app.add_option("--out", o.out, "output directory for factors");
  app.add_option("--log", o.log, "JSON Lines log (default OUT/log.jsonl)");
  app.add_flag("--bench", o.bench, "time basic against radi with the same shifts");
  app.add_option("--reps", o.reps, "benchmark repetitions");
  app.add_option("--seed", o.seed, "generator seed");
  app.add_option("--generate", o.generate, "synthetic problem: fd | random")
      ->check(CLI::IsMember({"fd", "random"}));
  app.add_option("--grid", o.grid, "fd grid points per direction");
  app.add_option("--n", o.n, "random problem size");
  app.add_option("--m", o.m, "inputs (columns of B)");
  app.add_option("--p", o.p, "outputs (rows of C)");
  app.add_flag("--mass", o.mass, "add a random SPD mass matrix");
  app.add_flag("--complex", o.complex_data, "complex random data");
  app.add_flag("--quiet", o.quiet, "print only the summary");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  std::optional<Manifest> man;
  if (!o.manifest.empty()) man = Manifest::read(o.manifest);
  const Manifest* mp = man ? &*man : nullptr;

  auto problem = std::make_shared<const CareProblem>(make_problem(o, mp));

  const std::string algo_name = pick<std::string>(o.algorithm, "", mp, "algorithm", to_string_id);
  std::string shifts_file = o.shifts_file;
  if (shifts_file.empty() && mp && mp->contains("shifts")) shifts_file = mp->resolve("shifts").string();
  std::string strategy_name = pick<std::string>(o.strategy, "", mp, "shift_strategy", to_string_id);
  if (strategy_name.empty()) strategy_name = shifts_file.empty() ? "residual-projection" : "fixed";
  if (strategy_name == "fixed" && shifts_file.empty())
    throw ConfigError("the fixed strategy needs --shifts-file");

  RunOptions options;
  options.batch = pick<Index>(o.batch, 0, mp, "batch", to_index);
  if (options.batch == 0) options.batch = 1;
  options.tol = pick<double>(o.tol, 0.0, mp, "tol", to_double);
  if (options.tol == 0.0) options.tol = 1e-10;
  options.max_steps = pick<Index>(o.max_steps, -1, mp, "max_steps", to_index);
  if (options.max_steps < 0) options.max_steps = 100;
  options.gain_only = o.gain_only || (mp && to_bool(mp->get("gain_only").value_or("false")));
  options.check_invariants = o.check_invariants;

  const fs::path out(o.out);
  fs::create_directories(out);
  const fs::path log_path = o.log.empty() ? out / "log.jsonl" : fs::path(o.log);

  std::vector<Shift> fixed;
  if (!shifts_file.empty()) fixed = read_shift_file(shifts_file);

  if (o.bench) {
    if (fixed.empty()) fixed = precompute_shifts(problem, o.window, options.tol, options.max_steps);
    return bench(*problem, fixed, o.reps, out);
  }
  if (algo_name == "algorithm1") {
    if (fixed.empty()) throw ConfigError("algorithm1 needs a shift list (--shifts-file)");
    return run_algorithm1(*problem, fixed, options.tol, out, log_path);
  }
  options.algorithm = algo_name.empty() ? default_algorithm(*problem) : parse_algorithm(algo_name);

  ShiftStrategy strategy = strategy_name == "fixed" ? ShiftStrategy::fixed(fixed)
                                                    : ShiftStrategy::residual_projection(o.window);
  if (problem->field_is_real())
    return solve<double>(problem, strategy, options, out, log_path, o.quiet);
  return solve<cplx>(problem, strategy, options, out, log_path, o.quiet);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfig;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kConfig;
  } catch (const ShiftRejected& e) {
    std::fprintf(stderr, "shift rejected: %s\n", e.what());
    return kBreakdown;
  } catch (const Breakdown& e) {
    std::fprintf(stderr, "breakdown: %s\n", e.what());
    return kBreakdown;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
}
