#include "lrcare/dense_kernels.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

namespace lrcare {

namespace {

template <typename Scalar>
bool strictly_lower(const Matrix<Scalar>& l) {
  for (Index j = 1; j < l.cols(); ++j)
    for (Index i = 0; i < j; ++i)
      if (l(i, j) != Scalar(0)) return false;
  return true;
}

template <typename Scalar>
Matrix<Scalar> shifted_solve_dense(const Matrix<Scalar>& l, bool triangular, Scalar d,
                                   const Matrix<Scalar>& rhs) {
  Matrix<Scalar> m = l;
  m.diagonal().array() += d;
  if (triangular) {
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, i) == Scalar(0)) throw Error("singular Sylvester equation");
    return m.template triangularView<Eigen::Lower>().solve(rhs);
  }
  Eigen::PartialPivLU<Matrix<Scalar>> lu(m);
  return lu.solve(rhs);
}

}  // namespace

template <typename Scalar>
Matrix<Scalar> solve_quasi_triangular_sylvester(const Matrix<Scalar>& lower,
                                                const Matrix<Scalar>& upper,
                                                const Matrix<Scalar>& rhs) {
  const Index k = lower.rows();
  const Index q = upper.rows();
  if (lower.cols() != k || upper.cols() != q || rhs.rows() != k || rhs.cols() != q)
    throw Error("Sylvester dimensions do not match");
  Matrix<Scalar> x = Matrix<Scalar>::Zero(k, q);
  if (k == 0 || q == 0) return x;
  const bool triangular = strictly_lower(lower);

  Index c = 0;
  while (c < q) {
    const bool pair = c + 1 < q && upper(c + 1, c) != Scalar(0);
    if (!pair) {
      Matrix<Scalar> r = rhs.col(c);
      if (c > 0) r -= x.leftCols(c) * upper.col(c).head(c);
      x.col(c) = shifted_solve_dense<Scalar>(lower, triangular, upper(c, c), r);
      c += 1;
      continue;
    }
    Matrix<Scalar> r(2 * k, 1);
    r.topRows(k) = rhs.col(c);
    r.bottomRows(k) = rhs.col(c + 1);
    if (c > 0) {
      r.topRows(k) -= x.leftCols(c) * upper.col(c).head(c);
      r.bottomRows(k) -= x.leftCols(c) * upper.col(c + 1).head(c);
    }
    const Matrix<Scalar> eye = Matrix<Scalar>::Identity(k, k);
    Matrix<Scalar> big(2 * k, 2 * k);
    big << lower + upper(c, c) * eye, upper(c + 1, c) * eye,
           upper(c, c + 1) * eye, lower + upper(c + 1, c + 1) * eye;
    Eigen::PartialPivLU<Matrix<Scalar>> lu(big);
    const Matrix<Scalar> sol = lu.solve(r);
    x.col(c) = sol.topRows(k);
    x.col(c + 1) = sol.bottomRows(k);
    c += 2;
  }
  return x;
}

template <typename Scalar>
Matrix<Scalar> upper_cholesky(const Matrix<Scalar>& m, Shift shift) {
  if (m.rows() == 0) return Matrix<Scalar>(0, 0);
  Eigen::LLT<Matrix<Scalar>> llt(hermitian_part(m));
  if (llt.info() != Eigen::Success)
    throw Breakdown(shift, "middle factor lost positive definiteness at shift " +
                               format_shift(shift));
  Matrix<Scalar> g = llt.matrixU();
  const auto diag = g.diagonal().real();
  if (!diag.allFinite() || diag.minCoeff() <= 0.0)
    throw Breakdown(shift, "middle factor lost positive definiteness at shift " +
                               format_shift(shift));
  return g;
}

template <typename Scalar>
double lowrank_difference_norm(const Matrix<Scalar>& l1, const Matrix<Scalar>& l2) {
  const Index k1 = l1.cols(), k2 = l2.cols();
  if (k1 + k2 == 0) return 0.0;
  Matrix<Scalar> w(l1.rows(), k1 + k2);
  w << l1, l2;
  Eigen::HouseholderQR<Matrix<Scalar>> qr(w);
  const Index r = std::min(w.rows(), w.cols());
  Matrix<Scalar> rt = qr.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  Matrix<Scalar> signed_rt = rt;
  signed_rt.rightCols(k2) *= Scalar(-1);
  return (signed_rt * rt.adjoint()).norm();
}

template MatrixXd solve_quasi_triangular_sylvester<double>(const MatrixXd&, const MatrixXd&,
                                                           const MatrixXd&);
template MatrixXc solve_quasi_triangular_sylvester<cplx>(const MatrixXc&, const MatrixXc&,
                                                         const MatrixXc&);
template MatrixXd upper_cholesky<double>(const MatrixXd&, Shift);
template MatrixXc upper_cholesky<cplx>(const MatrixXc&, Shift);
template double lowrank_difference_norm<double>(const MatrixXd&, const MatrixXd&);
template double lowrank_difference_norm<cplx>(const MatrixXc&, const MatrixXc&);

}  // namespace lrcare
