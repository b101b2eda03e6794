#include "lrcare/bench.hpp"

#include <iomanip>
#include <ostream>

#include "lrcare/dense_kernels.hpp"
#include "lrcare/run.hpp"

namespace lrcare {

namespace {

template <typename Scalar>
BenchResult compare(const CareProblem& problem, const std::vector<Shift>& shifts,
                    Index repetitions) {
  auto shared = std::make_shared<const CareProblem>(problem);
  BenchResult out;
  RunOptions options;
  options.batch = 1;
  options.tol = 1e-300;
  options.max_steps = static_cast<Index>(shifts.size());

  for (Index rep = 0; rep < repetitions; ++rep) {
    std::optional<CholeskyForm<Scalar>> finals[2];
    for (Algorithm algorithm : {Algorithm::basic, Algorithm::radi}) {
      LinearBackend backend(shared);
      ShiftStrategy strategy = ShiftStrategy::fixed(shifts);
      options.algorithm = algorithm;
      const auto result = run<Scalar>(backend, strategy, options);
      BenchTotals& totals = algorithm == Algorithm::basic ? out.basic : out.radi;
      for (const auto& rec : result.records) {
        for (Shift mu : rec.shifts) {
          // a realified pair is one step; report its first shift
          out.rows.push_back({to_string(algorithm), rep, rec.step, mu, rec.solve_seconds,
                              rec.misc_seconds, rec.rel_residual});
          break;
        }
        totals.solve_seconds += rec.solve_seconds;
        totals.misc_seconds += rec.misc_seconds;
      }
      finals[algorithm == Algorithm::basic ? 0 : 1] = cholesky_form(result.state);
    }
    const double scale = lowrank_norm(finals[0]->factor);
    const double diff = lowrank_difference_norm(finals[0]->factor, finals[1]->factor);
    const double rel = scale > 0.0 ? diff / scale : diff;
    out.max_relative_difference = std::max(out.max_relative_difference, rel);
  }
  if (out.max_relative_difference > kBenchMismatchTolerance)
    throw Error("basic and radi iterates differ: relative difference " +
                std::to_string(out.max_relative_difference));
  return out;
}

}  // namespace

BenchResult bench_compare(const CareProblem& problem, const std::vector<Shift>& shifts,
                          Index repetitions) {
  if (repetitions < 0) throw ConfigError("repetitions must not be negative");
  if (repetitions == 0) return {};
  if (shifts.empty()) throw ConfigError("bench needs at least one shift");
  if (problem.field_is_real()) return compare<double>(problem, shifts, repetitions);
  return compare<cplx>(problem, shifts, repetitions);
}

void write_bench_csv(std::ostream& out, const BenchResult& result) {
  out << "algorithm,step,shift_re,shift_im,solve_s,misc_s,rel_residual\n";
  out << std::setprecision(17);
  for (const auto& row : result.rows)
    out << row.algorithm << ',' << row.step << ',' << row.shift.real() << ',' << row.shift.imag()
        << ',' << row.solve_seconds << ',' << row.misc_seconds << ',' << row.rel_residual << '\n';
}

}  // namespace lrcare
