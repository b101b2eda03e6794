#pragma once

#include "lrcare/types.hpp"

namespace lrcare {

/// Solves L X + X D = F where L is lower quasi-triangular and D is upper
/// quasi-triangular (1x1 and 2x2 diagonal blocks). The spectra of L and -D
/// must be disjoint. Works column block by column block of D; each block is
/// a shifted solve with L.
template <typename Scalar>
Matrix<Scalar> solve_quasi_triangular_sylvester(const Matrix<Scalar>& lower,
                                                const Matrix<Scalar>& upper,
                                                const Matrix<Scalar>& rhs);

/// (M + M^H) / 2
template <typename Scalar>
Matrix<Scalar> hermitian_part(const Matrix<Scalar>& m) {
  return (m + m.adjoint()) / Scalar(2);
}

/// Upper Cholesky factor G with M = G^H G. Throws Breakdown (carrying
/// `shift`) when M is not numerically positive definite.
template <typename Scalar>
Matrix<Scalar> upper_cholesky(const Matrix<Scalar>& m, Shift shift);

/// ||L1 L1^H - L2 L2^H||_F evaluated from the small Gram matrix of [L1 L2].
template <typename Scalar>
double lowrank_difference_norm(const Matrix<Scalar>& l1, const Matrix<Scalar>& l2);

/// ||L L^H||_F = ||L^H L||_F
template <typename Scalar>
double lowrank_norm(const Matrix<Scalar>& l) {
  return (l.adjoint() * l).norm();
}

}  // namespace lrcare
