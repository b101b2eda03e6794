#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrcare/iterate_state.hpp"
#include "lrcare/linear_backend.hpp"
#include "lrcare/shifts.hpp"
#include "lrcare/step_stats.hpp"

namespace lrcare {

enum class Algorithm {
  basic,  // blocks (A^H - mu E^H)^{-1} R
  radi    // blocks (A^H - E^H K B^H - mu E^H)^{-1} R
};

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// RADI when m <= 4p, the plain shifted basis otherwise.
Algorithm default_algorithm(const CareProblem& problem);

struct RunOptions {
  Algorithm algorithm = Algorithm::radi;
  Index batch = 1;           // shifts requested per step
  double tol = 1e-10;        // on ||R^H R||_F / ||C C^H||_F
  Index max_steps = 100;     // solver steps (batches)
  Index max_shifts = -1;     // optional cap on applied shifts, -1 = none
  bool gain_only = false;    // RADI only
  bool check_invariants = false;
};

struct ConvergenceRecord {
  Index step = 0;
  std::vector<Shift> shifts;
  double rel_residual = 0.0;
  double solve_seconds = 0.0;
  double misc_seconds = 0.0;
  Index columns = 0;
};

/// One JSON object per line: step, shifts ([[re, im], ...]), rel_residual,
/// solve_s, misc_s, columns.
std::string to_json_line(const ConvergenceRecord& record);
ConvergenceRecord parse_json_line(const std::string& line);

template <typename Scalar>
struct RunResult {
  IterateState<Scalar> state;
  std::vector<ConvergenceRecord> records;
  bool converged = false;
};

using StepCallback = std::function<void(const ConvergenceRecord&)>;

/// Applies steps until the relative residual drops to tol or max_steps is
/// reached. Non-convergence is reported through `converged`, not thrown.
/// Shift computation is excluded from the recorded times.
template <typename Scalar>
RunResult<Scalar> run(LinearBackend& backend, ShiftStrategy& strategy, const RunOptions& options,
                      const StepCallback& on_step = {});

/// A single step of the configured algorithm for the given shifts.
template <typename Scalar>
IterateState<Scalar> apply_step(IterateState<Scalar> state, LinearBackend& backend,
                                Algorithm algorithm, std::span<const Shift> shifts,
                                StepStats* stats = nullptr);

}  // namespace lrcare
