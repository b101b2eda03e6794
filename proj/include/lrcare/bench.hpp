#pragma once

#include <iosfwd>
#include <vector>

#include "lrcare/problem.hpp"

namespace lrcare {

struct BenchRow {
  std::string algorithm;
  Index repetition = 0;
  Index step = 0;
  Shift shift;
  double solve_seconds = 0.0;
  double misc_seconds = 0.0;
  double rel_residual = 0.0;
};

struct BenchTotals {
  double solve_seconds = 0.0;
  double misc_seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  BenchTotals basic;  // summed over repetitions
  BenchTotals radi;
  /// max over repetitions of the final relative difference of the iterates
  double max_relative_difference = 0.0;
};

/// Maximum relative mismatch between the two algorithms' iterates before
/// the comparison is declared a correctness failure.
inline constexpr double kBenchMismatchTolerance = 1e-6;

/// Runs both algorithms with the same shifts, one shift per step, with a
/// cold factorization cache for each run. Throws Error when the final
/// iterates differ by more than kBenchMismatchTolerance.
BenchResult bench_compare(const CareProblem& problem, const std::vector<Shift>& shifts,
                          Index repetitions);

/// Header: algorithm,step,shift_re,shift_im,solve_s,misc_s,rel_residual
void write_bench_csv(std::ostream& out, const BenchResult& result);

}  // namespace lrcare
