#include <gtest/gtest.h>

#include <sstream>

#include "lrcare/bench.hpp"
#include "lrcare/run.hpp"
#include "test_util.hpp"

using namespace lrcare;
using namespace lrcare::testing;

TEST(Run, ScalarOneStep) {
  auto problem = share(scalar_problem());
  LinearBackend backend(problem);
  auto strategy = ShiftStrategy::fixed({Shift(std::sqrt(2.0))});
  RunOptions options;
  options.tol = 1e-12;
  for (Algorithm alg : {Algorithm::basic, Algorithm::radi}) {
    options.algorithm = alg;
    strategy = ShiftStrategy::fixed({Shift(std::sqrt(2.0))});
    const auto result = run<double>(backend, strategy, options);
    EXPECT_TRUE(result.converged);
    EXPECT_EQ(result.records.size(), 1u);
    EXPECT_EQ(result.records[0].columns, 1);
    EXPECT_GE(result.records[0].solve_seconds, 0.0);
    EXPECT_GE(result.records[0].misc_seconds, 0.0);
  }
}

TEST(Run, TrivialTermination) {
  auto problem = share(scalar_problem());
  LinearBackend backend(problem);
  auto strategy = ShiftStrategy::fixed({Shift(1.0)});
  RunOptions options;
  options.tol = 2.0;
  auto r = run<double>(backend, strategy, options);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.state.steps(), 0);
  options.tol = 1e-10;
  options.max_steps = 0;
  r = run<double>(backend, strategy, options);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.state.steps(), 0);
}

TEST(Run, BatchesAndCallbacks) {
  auto problem = share(random_stable_problem(30, 1, 1, 4));
  LinearBackend backend(problem);
  auto strategy = ShiftStrategy::fixed({Shift(1.0), Shift(2.0), Shift(3.0), Shift(4.0)});
  RunOptions options;
  options.algorithm = Algorithm::basic;
  options.batch = 2;
  options.tol = 1e-300;
  int calls = 0;
  const auto r = run<double>(backend, strategy, options, [&](const ConvergenceRecord&) { ++calls; });
  EXPECT_EQ(r.records.size(), 2u);
  EXPECT_EQ(calls, 2);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.records[1].shifts.size(), 2u);
}

TEST(Run, GainOnlyNeedsRadi) {
  auto problem = share(scalar_problem());
  LinearBackend backend(problem);
  auto strategy = ShiftStrategy::fixed({Shift(1.0)});
  RunOptions options;
  options.algorithm = Algorithm::basic;
  options.gain_only = true;
  EXPECT_THROW(run<double>(backend, strategy, options), ConfigError);
}

TEST(Run, ProjectionConverges) {
  auto problem = share(random_stable_problem(60, 2, 2, 21));
  LinearBackend backend(problem);
  auto strategy = ShiftStrategy::residual_projection();
  RunOptions options;
  options.tol = 1e-8;
  options.max_steps = 60;
  const auto r = run<double>(backend, strategy, options);
  EXPECT_TRUE(r.converged);
}

TEST(Run, JsonRoundTrip) {
  ConvergenceRecord rec{3, {Shift(1.5, -0.25), Shift(2.0, 0.0)}, 1.25e-7, 0.5, 0.125, 12};
  const auto line = to_json_line(rec);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto back = parse_json_line(line);
  EXPECT_EQ(back.step, 3);
  EXPECT_EQ(back.shifts, rec.shifts);
  EXPECT_EQ(back.rel_residual, rec.rel_residual);
  EXPECT_EQ(back.solve_seconds, 0.5);
  EXPECT_EQ(back.misc_seconds, 0.125);
  EXPECT_EQ(back.columns, 12);
  EXPECT_THROW(parse_json_line("{}"), InputError);
}

TEST(Run, DefaultAlgorithm) {
  EXPECT_EQ(default_algorithm(random_stable_problem(20, 4, 1, 1)), Algorithm::radi);
  EXPECT_EQ(default_algorithm(random_stable_problem(20, 5, 1, 1)), Algorithm::basic);
  EXPECT_EQ(parse_algorithm("basic"), Algorithm::basic);
  EXPECT_THROW(parse_algorithm("qadi"), ConfigError);
}

TEST(Bench, CsvRowsAndTotals) {
  const auto problem = convection_diffusion_problem(10, 4, 2, 3);
  const std::vector<Shift> mus = {Shift(50.0), Shift(200.0, 100.0), Shift(200.0, -100.0), Shift(800.0)};
  const auto result = bench_compare(problem, mus, 2);
  // the conjugate pair is one step
  EXPECT_EQ(result.rows.size(), 3u * 2u * 2u);
  EXPECT_LE(result.max_relative_difference, kBenchMismatchTolerance);
  EXPECT_GT(result.basic.solve_seconds, 0.0);
  std::ostringstream csv;
  write_bench_csv(csv, result);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "algorithm,step,shift_re,shift_im,solve_s,misc_s,rel_residual");
  EXPECT_TRUE(bench_compare(problem, mus, 0).rows.empty());
}
