#include "lrcare/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "lrcare/dense_kernels.hpp"

namespace lrcare {

namespace {

void require_small(Index n, Index limit, const char* what) {
  if (n > limit)
    throw ConfigError(std::string(what) + ": n = " + std::to_string(n) + " exceeds the dense limit " +
                      std::to_string(limit));
}

MatrixXc dense(const SparseXc& s) { return MatrixXc(s); }

}  // namespace

MatrixXc dense_lyap_solve(const MatrixXc& f, const MatrixXc& q) {
  Eigen::ComplexSchur<MatrixXc> schur(f);
  if (schur.info() != Eigen::Success) throw Error("Schur decomposition failed");
  const MatrixXc& u = schur.matrixU();
  const MatrixXc& t = schur.matrixT();
  const MatrixXc rhs = -(u.adjoint() * q * u);
  const MatrixXc th = t.adjoint();
  const MatrixXc y = solve_quasi_triangular_sylvester<cplx>(th, t, rhs);
  return u * y * u.adjoint();
}

MatrixXc kronecker_lyap_solve(const MatrixXc& f, const MatrixXc& q) {
  const Index n = f.rows();
  require_small(n, kKroneckerLimit, "kronecker_lyap_solve");
  const MatrixXc id = MatrixXc::Identity(n, n);
  MatrixXc big = MatrixXc::Zero(n * n, n * n);
  // vec(F^H X) = (I (x) F^H) vec X, vec(X F) = (F^T (x) I) vec X
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      big.block(i * n, j * n, n, n) += f(j, i) * id;
      if (i == j) big.block(i * n, j * n, n, n) += f.adjoint();
    }
  const Eigen::Map<const Eigen::VectorXcd> vq(q.data(), n * n);
  const Eigen::VectorXcd vx = big.partialPivLu().solve(-vq);
  return Eigen::Map<const MatrixXc>(vx.data(), n, n);
}

MatrixXc dense_residual(const CareProblem& problem, const MatrixXc& x) {
  require_small(problem.n(), kDenseResidualLimit, "dense_residual");
  const MatrixXc a = dense(problem.a<cplx>());
  const MatrixXc& b = problem.b<cplx>();
  const MatrixXc& c = problem.c<cplx>();
  const MatrixXc xe = problem.has_mass() ? MatrixXc(x * dense(problem.e<cplx>())) : x;
  const MatrixXc axe = a.adjoint() * xe;
  const MatrixXc bxe = b.adjoint() * xe;
  return axe + axe.adjoint() + c.adjoint() * c - bxe.adjoint() * bxe;
}

MatrixXc dense_care_solve(const CareProblem& problem) {
  const Index n = problem.n();
  require_small(n, kOracleLimit, "dense_care_solve");
  MatrixXc a = dense(problem.a<cplx>());
  MatrixXc b = problem.b<cplx>();
  const MatrixXc& c = problem.c<cplx>();
  Eigen::PartialPivLU<MatrixXc> elu;
  if (problem.has_mass()) {
    elu.compute(dense(problem.e<cplx>()));
    a = elu.solve(a);
    b = elu.solve(b);
  }
  const MatrixXc q0 = c.adjoint() * c;
  const double scale = std::max(q0.norm(), 1e-300);
  MatrixXc x = MatrixXc::Zero(n, n);
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const MatrixXc bx = b.adjoint() * x;
    const MatrixXc closed = a - b * bx;
    MatrixXc next = dense_lyap_solve(closed, q0 + bx.adjoint() * bx);
    next = hermitian_part(next);
    const double change = (next - x).norm();
    x = std::move(next);
    const MatrixXc bxn = b.adjoint() * x;
    const MatrixXc ax = a.adjoint() * x;
    const double res = (ax + ax.adjoint() + q0 - bxn.adjoint() * bxn).norm();
    if (res <= 1e-12 * scale || (change <= 1e-14 * std::max(x.norm(), 1.0) && res <= 1e-10 * scale)) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error("Newton-Kleinman did not converge in 50 iterations");
  if (problem.has_mass()) {
    // X_E = E^{-H} X E^{-1}
    const MatrixXc xe = elu.solve(MatrixXc(x.adjoint()));  // E^{-1} X
    x = hermitian_part(MatrixXc(elu.solve(MatrixXc(xe.adjoint()))));
  }
  return x;
}

double closed_loop_abscissa(const CareProblem& problem, const MatrixXc& x) {
  require_small(problem.n(), kOracleLimit, "closed_loop_abscissa");
  MatrixXc a = dense(problem.a<cplx>());
  const MatrixXc& b = problem.b<cplx>();
  if (problem.has_mass()) {
    const MatrixXc e = dense(problem.e<cplx>());
    a -= b * (b.adjoint() * x * e);
    a = e.partialPivLu().solve(a);
  } else {
    a -= b * (b.adjoint() * x);
  }
  Eigen::ComplexEigenSolver<MatrixXc> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

ProjectedSolution solve_via_projected_lyapunov(const CareProblem& problem,
                                               const std::vector<Shift>& shifts) {
  const Index n = problem.n(), p = problem.p();
  require_small(n, kOracleLimit, "solve_via_projected_lyapunov");
  if (shifts.empty()) throw ConfigError("at least one shift is required");
  const Index j = static_cast<Index>(shifts.size());
  const MatrixXc at = dense(problem.a<cplx>()).adjoint();
  const MatrixXc eh = problem.has_mass() ? MatrixXc(dense(problem.e<cplx>()).adjoint())
                                         : MatrixXc::Identity(n, n);

  // A^H Zhat_1 = C^H + mu_1 E^H Zhat_1,
  // A^H Zhat_k = E^H Zhat_{k-1} / nu_k + mu_k E^H Zhat_k.
  MatrixXc z(n, j * p);
  MatrixXc h = MatrixXc::Zero(p, j * p);
  MatrixXc hm = MatrixXc::Zero(j * p, j * p);
  MatrixXc rhs = problem.c<cplx>().adjoint();
  for (Index k = 0; k < j; ++k) {
    const Shift mu = shifts[k];
    if (!(mu.real() > 0.0)) throw ConfigError("shift " + format_shift(mu) + " not in C+");
    MatrixXc block = (at - mu * eh).partialPivLu().solve(rhs);
    double nu = 1.0;
    if (k > 0) {
      nu = block.norm();
      block /= nu;
    }
    z.middleCols(k * p, p) = block;
    if (k == 0) {
      h.leftCols(p).setIdentity();
    } else {
      hm.block((k - 1) * p, k * p, p, p).diagonal().setConstant(1.0 / nu);
    }
    hm.block(k * p, k * p, p, p).diagonal().setConstant(mu);
    rhs = eh * block;
  }

  const MatrixXc bz = problem.b<cplx>().adjoint() * z;
  const MatrixXc q = -(bz.adjoint() * bz + h.adjoint() * h);
  const MatrixXc yt = hermitian_part(dense_lyap_solve(hm, q));
  Eigen::LLT<MatrixXc> llt(yt);
  if (llt.info() != Eigen::Success) throw Error("projected Lyapunov solution is not positive definite");

  ProjectedSolution out;
  out.z = z;
  out.ytilde = yt;
  const MatrixXc yh = llt.solve(MatrixXc(h.adjoint()));
  out.x = hermitian_part(MatrixXc(z * llt.solve(MatrixXc(z.adjoint()))));
  out.residual = problem.c<cplx>().adjoint() + eh * (z * yh);
  return out;
}

}  // namespace lrcare
