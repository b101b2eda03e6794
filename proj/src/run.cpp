#include "lrcare/run.hpp"

#include <chrono>

#include <json.hpp>

#include "lrcare/solver_basic.hpp"
#include "lrcare/solver_radi.hpp"

namespace lrcare {

const char* to_string(Algorithm a) { return a == Algorithm::basic ? "basic" : "radi"; }

Algorithm parse_algorithm(const std::string& name) {
  if (name == "basic") return Algorithm::basic;
  if (name == "radi") return Algorithm::radi;
  throw ConfigError("unknown algorithm '" + name + "'");
}

Algorithm default_algorithm(const CareProblem& problem) {
  return problem.m() <= 4 * problem.p() ? Algorithm::radi : Algorithm::basic;
}

std::string to_json_line(const ConvergenceRecord& record) {
  nlohmann::json shifts = nlohmann::json::array();
  for (Shift mu : record.shifts) shifts.push_back({mu.real(), mu.imag()});
  nlohmann::json j = {{"step", record.step},
                      {"shifts", shifts},
                      {"rel_residual", record.rel_residual},
                      {"solve_s", record.solve_seconds},
                      {"misc_s", record.misc_seconds},
                      {"columns", record.columns}};
  return j.dump();
}

ConvergenceRecord parse_json_line(const std::string& line) {
  ConvergenceRecord r;
  try {
    const auto j = nlohmann::json::parse(line);
    r.step = j.at("step").get<Index>();
    for (const auto& s : j.at("shifts")) r.shifts.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
    r.rel_residual = j.at("rel_residual").get<double>();
    r.solve_seconds = j.at("solve_s").get<double>();
    r.misc_seconds = j.at("misc_s").get<double>();
    r.columns = j.at("columns").get<Index>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad log line: ") + e.what());
  }
  return r;
}

template <typename Scalar>
IterateState<Scalar> apply_step(IterateState<Scalar> state, LinearBackend& backend,
                                Algorithm algorithm, std::span<const Shift> shifts,
                                StepStats* stats) {
  if (algorithm == Algorithm::basic) return step_basic_batch(std::move(state), backend, shifts, stats);
  return step_radi_batch(std::move(state), backend, shifts, stats);
}

template <typename Scalar>
RunResult<Scalar> run(LinearBackend& backend, ShiftStrategy& strategy, const RunOptions& options,
                      const StepCallback& on_step) {
  using Clock = std::chrono::steady_clock;
  const CareProblem& problem = backend.problem();
  if (options.gain_only && options.algorithm != Algorithm::radi)
    throw ConfigError("gain-only mode requires the radi algorithm");
  if (options.batch < 1) throw ConfigError("batch size must be at least 1");
  if (!(options.tol > 0.0)) throw ConfigError("tolerance must be positive");

  RunResult<Scalar> result{IterateState<Scalar>::initial(problem, options.gain_only), {}, false};
  result.state.check_invariants = options.check_invariants;
  const double scale = problem.initial_residual_norm();
  double rel = residual_norm(result.state) / scale;
  if (rel <= options.tol) {
    result.converged = true;
    return result;
  }
  Index applied = 0;
  for (Index step = 1; step <= options.max_steps; ++step) {
    if (strategy.exhausted()) break;
    if (options.max_shifts >= 0 && applied >= options.max_shifts) break;
    std::vector<Shift> shifts = strategy.next(result.state, problem, options.batch);
    if (options.max_shifts >= 0) {
      const auto room = static_cast<std::size_t>(options.max_shifts - applied);
      if (shifts.size() > room) {
        shifts.resize(room);
        if (!shifts.empty() && problem.field_is_real() && !is_complex_v<Scalar> &&
            shifts.back().imag() > 0.0)
          shifts.pop_back();
        if (shifts.empty()) break;
      }
    }

    StepStats stats;
    const auto start = Clock::now();
    result.state = apply_step(std::move(result.state), backend, options.algorithm,
                              std::span<const Shift>(shifts), &stats);
    rel = residual_norm(result.state) / scale;
    const double total = std::chrono::duration<double>(Clock::now() - start).count();
    applied += static_cast<Index>(shifts.size());

    ConvergenceRecord record{step, shifts, rel, stats.solve_seconds,
                             std::max(0.0, total - stats.solve_seconds), result.state.columns()};
    result.records.push_back(record);
    if (on_step) on_step(record);
    if (rel <= options.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

template IterateState<double> apply_step(IterateState<double>, LinearBackend&, Algorithm,
                                         std::span<const Shift>, StepStats*);
template IterateState<cplx> apply_step(IterateState<cplx>, LinearBackend&, Algorithm,
                                       std::span<const Shift>, StepStats*);
template RunResult<double> run(LinearBackend&, ShiftStrategy&, const RunOptions&,
                               const StepCallback&);
template RunResult<cplx> run(LinearBackend&, ShiftStrategy&, const RunOptions&,
                             const StepCallback&);

}  // namespace lrcare
