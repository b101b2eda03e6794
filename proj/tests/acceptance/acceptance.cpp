// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "lrcare/bench.hpp"
#include "lrcare/generators.hpp"
#include "lrcare/oracle.hpp"
#include "lrcare/realify.hpp"
#include "lrcare/run.hpp"
#include "lrcare/solver_basic.hpp"
#include "lrcare/solver_radi.hpp"

using namespace lrcare;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const CareProblem> share(CareProblem p) {
  return std::make_shared<const CareProblem>(std::move(p));
}

CareProblem scalar_problem() {
  SparseXd a(1, 1);
  a.insert(0, 0) = -1.0;
  return CareProblem::assemble(a, MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1));
}

double rel_diff(const MatrixXc& x, const MatrixXc& ref) {
  const double s = ref.norm();
  return s > 0.0 ? (x - ref).norm() / s : (x - ref).norm();
}

template <typename Scalar>
MatrixXc dense_x(const IterateState<Scalar>& s) {
  return assemble_dense(s).template cast<cplx>();
}

std::vector<Shift> random_rhp_shifts(std::size_t count, std::mt19937_64& rng, bool paired) {
  std::uniform_real_distribution<double> re(0.5, 10.0), im(-5.0, 5.0), coin(0.0, 1.0);
  std::vector<Shift> out;
  while (out.size() < count) {
    Shift mu(re(rng), coin(rng) < 0.5 ? 0.0 : im(rng));
    if (paired && mu.imag() != 0.0) {
      if (out.size() + 2 > count) {
        mu = Shift(mu.real(), 0.0);
      } else {
        out.push_back(mu);
        out.push_back(std::conj(mu));
        continue;
      }
    }
    out.push_back(mu);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome scalar_exactness() {
  const auto start = Clock::now();
  auto problem = share(scalar_problem());
  LinearBackend backend(problem);
  const auto s =
      step_basic(IterateState<double>::initial(*problem), backend, Shift(std::sqrt(2.0)));
  const double x = assemble_dense(s)(0, 0);
  const double elapsed = seconds_since(start);
  const double err = std::abs(x - (std::sqrt(2.0) - 1.0));
  const double r = std::abs(s.r()(0, 0));
  return {err <= 1e-14 && r <= 1e-14 && elapsed < 1e-3,
          fmt("|X1-(sqrt2-1)| = %.1e, |R1| = %.1e, %.3f ms", err, r, elapsed * 1e3)};
}

Outcome two_step_scalar() {
  auto problem = share(scalar_problem());
  LinearBackend backend(problem);
  double worst = 0.0;
  std::string detail;
  for (Algorithm alg : {Algorithm::basic, Algorithm::radi}) {
    auto s = IterateState<double>::initial(*problem);
    const Shift one[] = {Shift(1.0)}, two[] = {Shift(2.0)};
    s = apply_step(std::move(s), backend, alg, std::span<const Shift>(one));
    const double x1 = assemble_dense(s)(0, 0);
    s = apply_step(std::move(s), backend, alg, std::span<const Shift>(two));
    const double x2 = assemble_dense(s)(0, 0);
    const double r2 = s.r()(0, 0);
    const double e = std::max({std::abs(x1 - 0.4), std::abs(x2 - 0.4137931), std::abs(r2 + 0.0344828)});
    worst = std::max(worst, e);
    detail += fmt("%s: X1=%.7f X2=%.7f R2=%.7f; ", to_string(alg), x1, x2, r2);
  }
  return {worst <= 1e-6, detail + fmt("max deviation %.1e", worst)};
}

struct RandomInstance {
  std::shared_ptr<const CareProblem> problem;
  std::vector<Shift> shifts;
};

std::vector<RandomInstance> equivalence_instances() {
  std::vector<RandomInstance> out;
  std::mt19937_64 rng(2024);
  const Index ms[] = {1, 2, 10};
  const Index ps[] = {1, 2};
  for (int i = 0; i < 20; ++i) {
    const Index m = ms[i % 3];
    const Index p = ps[(i / 3) % 2];
    auto problem = share(random_stable_problem(50, m, p, 1000 + i, i % 2 == 1));
    out.push_back({problem, random_rhp_shifts(8, rng, false)});
  }
  return out;
}

Outcome method_equivalence(const std::vector<RandomInstance>& instances) {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const auto& inst : instances) {
    LinearBackend backend(inst.problem);
    auto basic = IterateState<cplx>::initial(*inst.problem);
    auto radi = IterateState<cplx>::initial(*inst.problem);
    for (Shift mu : inst.shifts) {
      basic = step_basic(std::move(basic), backend, mu);
      radi = step_radi(std::move(radi), backend, mu);
      worst = std::max(worst, rel_diff(dense_x(radi), dense_x(basic)));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-8 && elapsed < 30.0,
          fmt("max ||X_basic - X_radi||/||X|| = %.2e over 20 problems x 8 shifts, %.2f s", worst,
              elapsed)};
}

Outcome rank_p_residual(const std::vector<RandomInstance>& instances) {
  double worst_identity = 0.0;
  Index worst_excess = 0;
  Index checks = 0;
  for (const auto& inst : instances) {
    const CareProblem& problem = *inst.problem;
    LinearBackend backend(inst.problem);
    const double scale = problem.initial_residual_norm();
    for (Algorithm alg : {Algorithm::basic, Algorithm::radi}) {
      auto s = IterateState<cplx>::initial(problem);
      for (Shift mu : inst.shifts) {
        const Shift one[] = {mu};
        s = apply_step(std::move(s), backend, alg, std::span<const Shift>(one));
        const MatrixXc res = dense_residual(problem, dense_x(s));
        worst_identity = std::max(worst_identity, (res - s.r() * s.r().adjoint()).norm() / scale);
        Eigen::JacobiSVD<MatrixXc> svd(res);
        const auto& sv = svd.singularValues();
        Index rank = 0;
        for (Index i = 0; i < sv.size(); ++i)
          if (sv(i) > 1e-8 * sv(0)) ++rank;
        worst_excess = std::max(worst_excess, rank - problem.p());
        ++checks;
      }
    }
  }
  return {worst_identity <= 1e-9 && worst_excess <= 0,
          fmt("max ||R_dense - R R^H||/||C^H C|| = %.2e, max(rank - p) = %lld over %lld iterates",
              worst_identity, static_cast<long long>(worst_excess), static_cast<long long>(checks))};
}

Outcome oracle_convergence() {
  const auto start = Clock::now();
  struct Case {
    const char* name;
    CareProblem problem;
  };
  std::vector<Case> cases;
  cases.push_back({"random m=1 p=1", random_stable_problem(100, 1, 1, 51)});
  cases.push_back({"random m=3 p=2 complex", random_stable_problem(100, 3, 2, 52, true)});
  cases.push_back({"fd m=1 p=1", convection_diffusion_problem(10, 1, 1, 53)});
  cases.push_back({"fd m=4 p=2", convection_diffusion_problem(10, 4, 2, 54)});
  bool pass = true;
  std::string detail;
  for (auto& c : cases) {
    auto problem = share(c.problem);
    const MatrixXc oracle = dense_care_solve(*problem);
    for (Algorithm alg : {Algorithm::basic, Algorithm::radi}) {
      LinearBackend backend(problem);
      ShiftStrategy strategy = ShiftStrategy::residual_projection();
      RunOptions options;
      options.algorithm = alg;
      options.tol = 1e-8;
      options.max_steps = 60;
      options.max_shifts = 60;
      double err = 0.0, rel = 0.0;
      Index shifts = 0;
      bool converged = false;
      if (problem->field_is_real()) {
        const auto r = run<double>(backend, strategy, options);
        converged = r.converged;
        shifts = r.state.steps();
        rel = r.records.empty() ? 1.0 : r.records.back().rel_residual;
        err = rel_diff(dense_x(r.state), oracle);
      } else {
        const auto r = run<cplx>(backend, strategy, options);
        converged = r.converged;
        shifts = r.state.steps();
        rel = r.records.empty() ? 1.0 : r.records.back().rel_residual;
        err = rel_diff(dense_x(r.state), oracle);
      }
      const bool ok = converged && shifts <= 60 && err <= 1e-6;
      pass = pass && ok;
      detail += fmt("[%s %s: %lld shifts, res %.1e, err %.1e%s] ", c.name, to_string(alg),
                    static_cast<long long>(shifts), rel, err, ok ? "" : " !");
    }
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 60.0;
  return {pass, detail + fmt("%.2f s", elapsed)};
}

Outcome batch_sequential() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const bool complex_data = i % 2 == 1;
    auto problem = share(random_stable_problem(50, 1 + i % 3, 1 + i % 2, 3000 + i, complex_data));
    LinearBackend backend(problem);
    // on real data each batch of two is a conjugate pair or two real shifts
    std::vector<Shift> mus;
    if (complex_data) {
      mus = random_rhp_shifts(4, rng, false);
    } else {
      for (int half = 0; half < 2; ++half) {
        auto two = random_rhp_shifts(2, rng, true);
        if (two[0].imag() != 0.0 && two[1] != std::conj(two[0])) two[0] = Shift(two[0].real(), 0.0);
        mus.insert(mus.end(), two.begin(), two.end());
      }
    }
    for (Algorithm alg : {Algorithm::basic, Algorithm::radi}) {
      auto compare = [&](auto seq, auto batch) {
        for (std::size_t k = 0; k < mus.size();) {
          const std::size_t len =
              (!complex_data && mus[k].imag() != 0.0) ? 2 : 1;  // a pair is one unit
          seq = apply_step(std::move(seq), backend, alg, std::span<const Shift>(mus).subspan(k, len));
          k += len;
        }
        for (std::size_t k = 0; k < mus.size(); k += 2)
          batch = apply_step(std::move(batch), backend, alg, std::span<const Shift>(mus).subspan(k, 2));
        worst = std::max(worst, rel_diff(dense_x(batch), dense_x(seq)));
      };
      if (complex_data)
        compare(IterateState<cplx>::initial(*problem), IterateState<cplx>::initial(*problem));
      else
        compare(IterateState<double>::initial(*problem), IterateState<double>::initial(*problem));
    }
  }
  return {worst <= 1e-9,
          fmt("max ||X_batch - X_seq||/||X|| = %.2e (10 problems, both algorithms)", worst)};
}

Outcome realification() {
  auto problem = share(random_stable_problem(50, 2, 2, 4242));
  const std::vector<Shift> mus = {Shift(1.0, 1.0), Shift(1.0, -1.0), Shift(2.0, 0.5),
                                  Shift(2.0, -0.5)};
  double worst = 0.0;
  bool counters_ok = true;
  std::string detail;
  for (Algorithm alg : {Algorithm::basic, Algorithm::radi}) {
    LinearBackend backend(problem);
    auto real = IterateState<double>::initial(*problem);
    for (std::size_t k = 0; k < mus.size(); k += 2)
      real = apply_step(std::move(real), backend, alg, std::span<const Shift>(mus).subspan(k, 2));
    const auto complex_solves = backend.complex_solves();
    const auto real_solves = backend.real_solves();
    counters_ok = counters_ok && complex_solves == 2 && real_solves == 0;

    LinearBackend cbackend(problem);
    auto ref = IterateState<cplx>::initial(*problem);
    for (Shift mu : mus) {
      const Shift one[] = {mu};
      ref = apply_step(std::move(ref), cbackend, alg, std::span<const Shift>(one));
    }
    worst = std::max(worst, rel_diff(dense_x(real), dense_x(ref)));
    detail += fmt("%s: %llu complex / %llu real solves; ", to_string(alg),
                  static_cast<unsigned long long>(complex_solves),
                  static_cast<unsigned long long>(real_solves));
  }
  // IterateState<double> holds every array in real storage.
  return {worst <= 1e-10 && counters_ok,
          detail + fmt("real storage; max ||X_real - X_complex||/||X|| = %.2e", worst)};
}

Outcome lyapunov_specialization() {
  double worst_traj = 0.0, worst_dense = 0.0;
  bool converged = true;
  std::vector<CareProblem> cases;
  cases.push_back(random_stable_problem(80, 0, 2, 61));
  cases.push_back(random_stable_problem(80, 0, 1, 62, true));
  cases.push_back(convection_diffusion_problem(9, 0, 2, 63));
  for (auto& instance : cases) {
    auto problem = share(instance);
    LinearBackend backend(problem);
    // shifts from a projection run, then both algorithms on the same list
    ShiftStrategy strategy = ShiftStrategy::residual_projection();
    RunOptions options;
    options.tol = 1e-11;
    options.max_steps = 100;
    std::vector<Shift> mus;
    auto collect = [&](const ConvergenceRecord& r) {
      mus.insert(mus.end(), r.shifts.begin(), r.shifts.end());
    };
    const auto r = run<cplx>(backend, strategy, options, collect);
    converged = converged && r.converged;
    auto basic = IterateState<cplx>::initial(*problem);
    auto radi = IterateState<cplx>::initial(*problem);
    for (Shift mu : mus) {
      basic = step_basic(std::move(basic), backend, mu);
      radi = step_radi(std::move(radi), backend, mu);
      worst_traj = std::max(worst_traj, rel_diff(dense_x(radi), dense_x(basic)));
    }
    const MatrixXc a = MatrixXc(problem->a<cplx>());
    const MatrixXc c = problem->c<cplx>();
    const MatrixXc xd = dense_lyap_solve(a, c.adjoint() * c);
    worst_dense = std::max(worst_dense, rel_diff(dense_x(radi), xd));
  }
  return {converged && worst_traj <= 1e-10 && worst_dense <= 1e-8,
          fmt("max ||X_basic - X_radi||/||X|| = %.2e per step, ||X - X_dense||/||X_dense|| = %.2e",
              worst_traj, worst_dense)};
}

// Records every matrix handed to the factorization layer.
class AuditingProvider : public FactorizationProvider {
 public:
  explicit AuditingProvider(std::shared_ptr<const FactorizationProvider> inner)
      : inner_(std::move(inner)) {}
  std::unique_ptr<Factorization<double>> factorize(const SparseXd& m) const override {
    record(m.cast<cplx>());
    return inner_->factorize(m);
  }
  std::unique_ptr<Factorization<cplx>> factorize(const SparseXc& m) const override {
    record(m);
    return inner_->factorize(m);
  }
  std::vector<MatrixXc> seen() const {
    std::lock_guard lock(mutex_);
    return seen_;
  }

 private:
  void record(const SparseXc& m) const {
    std::lock_guard lock(mutex_);
    seen_.push_back(MatrixXc(m));
  }
  std::shared_ptr<const FactorizationProvider> inner_;
  mutable std::mutex mutex_;
  mutable std::vector<MatrixXc> seen_;
};

Outcome generalized() {
  auto problem = share(with_random_spd_mass(random_stable_problem(60, 2, 2, 71), 72));
  const MatrixXc oracle = dense_care_solve(*problem);
  const MatrixXc at = MatrixXc(problem->a<cplx>()).adjoint();
  const MatrixXc eh = MatrixXc(problem->e<cplx>()).adjoint();
  double worst = 0.0;
  bool audit = true;
  Index factorizations = 0;
  for (Algorithm alg : {Algorithm::basic, Algorithm::radi}) {
    auto provider = std::make_shared<AuditingProvider>(make_sparse_lu_provider());
    LinearBackend backend(problem, 8, provider);
    ShiftStrategy strategy = ShiftStrategy::residual_projection();
    RunOptions options;
    options.algorithm = alg;
    options.tol = 1e-10;
    options.max_steps = 100;
    const auto r = run<double>(backend, strategy, options);
    worst = std::max(worst, rel_diff(dense_x(r.state), oracle));
    if (!r.converged) audit = false;
    // every factorized matrix must be A^H - mu E^H for one of the used shifts
    for (const MatrixXc& m : provider->seen()) {
      ++factorizations;
      bool matched = false;
      for (Shift mu : r.state.shifts())
        if ((m - (at - mu * eh)).norm() <= 1e-12 * m.norm()) matched = true;
      audit = audit && matched;
    }
  }
  return {worst <= 1e-6 && audit,
          fmt("||X - X_oracle||/||X_oracle|| = %.2e; %lld factorized matrices, all of the form "
              "A^H - mu E^H: %s",
              worst, static_cast<long long>(factorizations), audit ? "yes" : "no")};
}

Outcome algorithm1_reference() {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  std::vector<CareProblem> cases;
  cases.push_back(random_stable_problem(100, 2, 2, 81));
  cases.push_back(random_stable_problem(100, 1, 1, 82, true));
  cases.push_back(convection_diffusion_problem(10, 3, 2, 83));
  cases.push_back(with_random_spd_mass(random_stable_problem(80, 2, 1, 84), 85));
  cases.push_back(random_stable_problem(60, 0, 2, 86));
  for (auto& c : cases) {
    auto problem = share(c);
    const bool fd = problem->n() == 100 && problem->m() == 3;
    auto mus = random_rhp_shifts(8, rng, false);
    if (fd)
      for (auto& mu : mus) mu *= 100.0;  // spectrum of the stencil is much wider
    const auto ref = solve_via_projected_lyapunov(*problem, mus);
    LinearBackend backend(problem);
    for (Algorithm alg : {Algorithm::basic, Algorithm::radi}) {
      auto s = IterateState<cplx>::initial(*problem);
      for (Shift mu : mus) {
        const Shift one[] = {mu};
        s = apply_step(std::move(s), backend, alg, std::span<const Shift>(one));
      }
      worst = std::max(worst, rel_diff(dense_x(s), ref.x));
    }
  }
  return {worst <= 1e-8,
          fmt("max ||X_incremental - X_alg1||/||X_alg1|| = %.2e (5 problems, both algorithms)", worst)};
}

Outcome timing_trend() {
  const auto start = Clock::now();
  const Index grid = 100, p = 3, m = 100 * p;
  const CareProblem problem = convection_diffusion_problem(grid, m, p, 2718);
  // 20 real shifts log-spaced over the spectral range of the stencil
  const double h = 1.0 / (grid + 1);
  const double lo = 2.0 * M_PI * M_PI, hi = 8.0 / (h * h);
  std::vector<Shift> mus;
  for (int k = 0; k < 20; ++k) mus.emplace_back(lo * std::pow(hi / lo, k / 19.0), 0.0);
  const BenchResult result = bench_compare(problem, mus, 1);
  const double ratio = result.basic.solve_seconds / result.radi.solve_seconds;
  const double elapsed = seconds_since(start);
  return {ratio < 0.5 && elapsed < 600.0,
          fmt("n = %lld, m = %lld, p = %lld: lin. solves basic %.3f s, radi %.3f s (ratio %.3f); "
              "misc basic %.3f s, radi %.3f s; iterate mismatch %.1e; %.1f s",
              static_cast<long long>(problem.n()), static_cast<long long>(m),
              static_cast<long long>(p), result.basic.solve_seconds, result.radi.solve_seconds,
              ratio, result.basic.misc_seconds, result.radi.misc_seconds,
              result.max_relative_difference, elapsed)};
}

Outcome smw_correctness() {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<Index> size(10, 200), small(1, 5);
  std::uniform_real_distribution<double> re(0.1, 10.0), im(-5.0, 5.0);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index n = size(rng), m = small(rng), p = small(rng);
    auto problem = share(random_stable_problem(n, m, std::min(p, n), 5000 + i, i % 2 == 1));
    LinearBackend backend(problem);
    const Shift mu(re(rng), i % 3 == 0 ? 0.0 : im(rng));
    MatrixXc k(n, m), rhs(n, p);
    for (Index j = 0; j < k.size(); ++j) k(j) = cplx(normal(rng), normal(rng));
    for (Index j = 0; j < rhs.size(); ++j) rhs(j) = cplx(normal(rng), normal(rng));
    const MatrixXc x = backend.smw_solve<cplx>(mu, k, rhs);
    const MatrixXc dense = MatrixXc(problem->a<cplx>()).adjoint() -
                           k * problem->b<cplx>().adjoint() -
                           mu * MatrixXc::Identity(n, n);
    const MatrixXc ref = dense.partialPivLu().solve(rhs);
    worst = std::max(worst, rel_diff(x, ref));
  }
  return {worst <= 1e-9, fmt("max relative error vs dense solve = %.2e over 50 instances", worst)};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };
  const auto instances = equivalence_instances();
  report(1, "scalar exactness", scalar_exactness);
  report(2, "two-step scalar trajectory", two_step_scalar);
  report(3, "method equivalence", [&] { return method_equivalence(instances); });
  report(4, "rank-p residual identity", [&] { return rank_p_residual(instances); });
  report(5, "oracle convergence", oracle_convergence);
  report(6, "batch equals sequential", batch_sequential);
  report(7, "realification", realification);
  report(8, "Lyapunov specialization", lyapunov_specialization);
  report(9, "generalized equations", generalized);
  report(10, "reference path equals incremental path", algorithm1_reference);
  report(11, "timing trend for m = 100p", timing_trend);
  report(12, "SMW correctness", smw_correctness);
  std::printf("%d of 12 criteria failed\n", failed);
  return failed;
}
