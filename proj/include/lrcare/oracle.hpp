#pragma once

#include <vector>

#include "lrcare/problem.hpp"

namespace lrcare {

/// Dense reference solvers for small problems. Everything here works in
/// complex arithmetic on dense copies of the problem data.

inline constexpr Index kOracleLimit = 200;
inline constexpr Index kKroneckerLimit = 60;
inline constexpr Index kDenseResidualLimit = 5000;

/// Solves F^H X + X F + Q = 0 through a complex Schur form of F.
MatrixXc dense_lyap_solve(const MatrixXc& f, const MatrixXc& q);

/// Same equation through the n^2 x n^2 Kronecker system. n <= 60.
MatrixXc kronecker_lyap_solve(const MatrixXc& f, const MatrixXc& q);

/// Stabilizing solution by Newton-Kleinman from X = 0. Generalized problems
/// are reduced to E^{-1} A, E^{-1} B and mapped back. Requires a
/// stable A (pencil).
MatrixXc dense_care_solve(const CareProblem& problem);

/// A^H X E + E^H X A + C^H C - E^H X B B^H X E (E = I when absent).
MatrixXc dense_residual(const CareProblem& problem, const MatrixXc& x);

struct ProjectedSolution {
  MatrixXc x;         // Z Ytilde^{-1} Z^H
  MatrixXc residual;  // R with dense_residual(X) = R R^H
  MatrixXc z;
  MatrixXc ytilde;
};

/// Builds a block rational Arnoldi decomposition A^H [C^H Z] [0; I] =
/// [C^H Z] [h; H] with the given poles, solves the projected Lyapunov
/// equation Yt H + H^H Yt = Z^H B B^H Z + h^H h densely and returns
/// X = Z Yt^{-1} Z^H. The basis is generated by continuation with the
/// previous block, independently of the incremental solvers.
ProjectedSolution solve_via_projected_lyapunov(const CareProblem& problem,
                                               const std::vector<Shift>& shifts);

/// Largest real part of the eigenvalues of A - B B^H X (pencil with E).
double closed_loop_abscissa(const CareProblem& problem, const MatrixXc& x);

}  // namespace lrcare
