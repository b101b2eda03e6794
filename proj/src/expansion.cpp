#include "expansion.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <optional>
#include <thread>

#include <Eigen/QR>

#include "lrcare/dense_kernels.hpp"

namespace lrcare::detail {

namespace {

using Clock = std::chrono::steady_clock;

// Runs fn(i) for i in [0, count) on up to hardware_concurrency threads.
// Rethrows the exception of the lowest failing index.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <typename Scalar>
Scalar as_scalar(Shift mu) {
  if constexpr (is_complex_v<Scalar>) {
    return mu;
  } else {
    return mu.real();
  }
}

// [Re w1, Im w1, ..., Re wp, Im wp]
MatrixXd interleave(const MatrixXc& w) {
  MatrixXd out(w.rows(), 2 * w.cols());
  for (Index i = 0; i < w.cols(); ++i) {
    out.col(2 * i) = w.col(i).real();
    out.col(2 * i + 1) = w.col(i).imag();
  }
  return out;
}

Index group_width(const ShiftGroup& g, Index p) { return g.conjugate_pair ? 2 * p : p; }

// New columns for each group: solve(mu, rhs, feedback) with feedback empty
// for plain shifted solves.
template <typename Scalar>
std::vector<Matrix<Scalar>> solve_groups(LinearBackend& backend,
                                         const std::vector<ShiftGroup>& groups,
                                         const Matrix<Scalar>& rhs, const Matrix<Scalar>* feedback,
                                         StepStats* stats) {
  std::vector<Matrix<Scalar>> cols(groups.size());
  const auto start = Clock::now();
  parallel_for(groups.size(), [&](std::size_t i) {
    const ShiftGroup& g = groups[i];
    if (!g.conjugate_pair) {
      cols[i] = feedback ? backend.smw_solve<Scalar>(g.mu, *feedback, rhs)
                         : backend.shifted_solve<Scalar>(g.mu, rhs);
      return;
    }
    if constexpr (is_complex_v<Scalar>) {
      throw ConfigError("conjugate pairs are only used with real arithmetic");
    } else {
      const MatrixXc rc = rhs.template cast<cplx>();
      const MatrixXc w = feedback ? backend.smw_solve<cplx>(g.mu, feedback->template cast<cplx>(), rc)
                                  : backend.shifted_solve<cplx>(g.mu, rc);
      cols[i] = interleave(w);
    }
  });
  if (stats) stats->solve_seconds += std::chrono::duration<double>(Clock::now() - start).count();
  return cols;
}

template <typename Scalar>
Matrix<Scalar> hcat_all(const std::vector<Matrix<Scalar>>& parts, Index rows) {
  Index total = 0;
  for (const auto& m : parts) total += m.cols();
  Matrix<Scalar> out(rows, total);
  Index c = 0;
  for (const auto& m : parts) {
    out.middleCols(c, m.cols()) = m;
    c += m.cols();
  }
  return out;
}

// Coupling of the new columns to C^H (U1) and the new diagonal block D in
// real-or-complex storage for the chosen groups.
template <typename Scalar>
void coupling_blocks(const std::vector<ShiftGroup>& groups, Index p, Matrix<Scalar>& u1,
                     Matrix<Scalar>& d, std::vector<Shift>& shifts) {
  Index q = 0;
  for (const auto& g : groups) q += group_width(g, p);
  u1 = Matrix<Scalar>::Zero(p, q);
  d = Matrix<Scalar>::Zero(q, q);
  Index c = 0;
  for (const auto& g : groups) {
    if (!g.conjugate_pair) {
      u1.middleCols(c, p).setIdentity();
      d.block(c, c, p, p).diagonal().setConstant(as_scalar<Scalar>(g.mu));
      shifts.push_back(g.mu);
    } else {
      for (Index i = 0; i < p; ++i) u1(i, c + 2 * i) = Scalar(1);
      d.block(c, c, 2 * p, 2 * p) = rotation_block(g.mu, p).template cast<Scalar>();
      shifts.push_back(g.mu);
      shifts.push_back(std::conj(g.mu));
    }
    c += group_width(g, p);
  }
}

// Replaces zhat by an orthonormal basis zhat R^{-1} of its span and d by
// R d R^{-1}, which keeps d block upper triangular. Returns R^{-1} for the
// remaining coupling blocks. Batches of nearby shifts give nearly
// collinear columns; the orthonormal form loses far less accuracy.
// Numerically rank deficient blocks are left alone and nullopt is returned.
template <typename Scalar>
std::optional<Matrix<Scalar>> orthonormalize(Matrix<Scalar>& zhat, Matrix<Scalar>& d) {
  const Index q = zhat.cols();
  if (q > zhat.rows()) return std::nullopt;
  Eigen::HouseholderQR<Matrix<Scalar>> qr(zhat);
  const Matrix<Scalar> rq = qr.matrixQR().topRows(q).template triangularView<Eigen::Upper>();
  const auto diag = rq.diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 1e-13 * diag.maxCoeff())) return std::nullopt;
  const Matrix<Scalar> rinv =
      rq.template triangularView<Eigen::Upper>().solve(Matrix<Scalar>::Identity(q, q));
  zhat = qr.householderQ() * Matrix<Scalar>::Identity(zhat.rows(), q);
  d = rq * d * rinv;
  return rinv;
}

}  // namespace

template <typename Scalar>
IterateState<Scalar> basic_expand_groups(IterateState<Scalar> state, LinearBackend& backend,
                                         const std::vector<ShiftGroup>& groups, StepStats* stats) {
  if (groups.empty()) return state;
  const CareProblem& problem = backend.problem();
  const Index p = state.p();
  const auto cols = solve_groups<Scalar>(backend, groups, state.r(), nullptr, stats);

  ExpansionBlock<Scalar> block;
  block.zhat = hcat_all(cols, state.n());
  coupling_blocks<Scalar>(groups, p, block.u1, block.d, block.shifts);
  block.u2 = state.apply_y(Matrix<Scalar>(state.h().adjoint())) * block.u1;
  if (groups.size() > 1) {
    if (auto rinv = orthonormalize(block.zhat, block.d)) {
      block.u1 = block.u1 * *rinv;
      block.u2 = block.u2 * *rinv;
    }
  }
  return expand(std::move(state), problem, block);
}

template <typename Scalar>
IterateState<Scalar> radi_expand_groups(IterateState<Scalar> state, LinearBackend& backend,
                                        const std::vector<ShiftGroup>& groups, StepStats* stats) {
  if (groups.empty()) return state;
  const CareProblem& problem = backend.problem();
  const Index p = state.p();
  const Matrix<Scalar> feedback = problem.apply_mass_adjoint<Scalar>(state.k());
  const auto cols = solve_groups<Scalar>(backend, groups, state.r(), &feedback, stats);

  if (groups.size() > 1) {
    Matrix<Scalar> zhat = hcat_all(cols, state.n());
    Matrix<Scalar> u1, d;
    std::vector<Shift> shifts;
    coupling_blocks<Scalar>(groups, p, u1, d, shifts);
    if (auto rinv = orthonormalize(zhat, d)) u1 = u1 * *rinv;
    const Matrix<Scalar> bzhat = problem.b<Scalar>().adjoint() * zhat;
    const Matrix<Scalar> rhs = bzhat.adjoint() * bzhat + u1.adjoint() * u1;
    const Matrix<Scalar> dh = d.adjoint();
    const Matrix<Scalar> y22 =
        hermitian_part<Scalar>(solve_quasi_triangular_sylvester<Scalar>(dh, d, rhs));
    return expand_block_diagonal(std::move(state), problem, zhat, bzhat, y22, u1, d, shifts);
  }

  const Matrix<Scalar> zhat = hcat_all(cols, state.n());
  const Index q = zhat.cols();
  const Matrix<Scalar> bzhat = problem.b<Scalar>().adjoint() * zhat;

  // Single group: closed form in the complex basis [W, conj(W)], related to the
  // stored columns by zhat = zhat_c T.
  MatrixXc t = MatrixXc::Identity(q, q);
  MatrixXc u1c = MatrixXc::Zero(p, q);
  std::vector<cplx> poles(q);
  Index c = 0;
  for (const auto& g : groups) {
    if (!g.conjugate_pair) {
      u1c.middleCols(c, p).setIdentity();
      std::fill(poles.begin() + c, poles.begin() + c + p, g.mu);
      c += p;
    } else {
      t.block(c, c, 2 * p, 2 * p) = conjugate_pair_transform(p);
      u1c.middleCols(c, p).setIdentity();
      u1c.middleCols(c + p, p).setIdentity();
      std::fill(poles.begin() + c, poles.begin() + c + p, g.mu);
      std::fill(poles.begin() + c + p, poles.begin() + c + 2 * p, std::conj(g.mu));
      c += 2 * p;
    }
  }
  const MatrixXc tinv = t.inverse();
  const MatrixXc bzc = bzhat.template cast<cplx>() * tinv;
  MatrixXc y22c = bzc.adjoint() * bzc + u1c.adjoint() * u1c;
  for (Index j = 0; j < q; ++j)
    for (Index i = 0; i < q; ++i) y22c(i, j) /= std::conj(poles[i]) + poles[j];
  const MatrixXc y22t = t.adjoint() * y22c * t;

  Matrix<Scalar> u1, d;
  std::vector<Shift> shifts;
  coupling_blocks<Scalar>(groups, p, u1, d, shifts);

  Matrix<Scalar> y22;
  if constexpr (is_complex_v<Scalar>) {
    y22 = y22t;
  } else {
    y22 = y22t.real();
  }
  return expand_block_diagonal(std::move(state), problem, zhat, bzhat, y22, u1, d, shifts);
}

template IterateState<double> basic_expand_groups<double>(IterateState<double>, LinearBackend&,
                                                          const std::vector<ShiftGroup>&,
                                                          StepStats*);
template IterateState<cplx> basic_expand_groups<cplx>(IterateState<cplx>, LinearBackend&,
                                                      const std::vector<ShiftGroup>&, StepStats*);
template IterateState<double> radi_expand_groups<double>(IterateState<double>, LinearBackend&,
                                                         const std::vector<ShiftGroup>&,
                                                         StepStats*);
template IterateState<cplx> radi_expand_groups<cplx>(IterateState<cplx>, LinearBackend&,
                                                     const std::vector<ShiftGroup>&, StepStats*);

}  // namespace lrcare::detail
