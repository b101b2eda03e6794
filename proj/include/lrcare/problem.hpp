#pragma once

#include <optional>

#include "lrcare/types.hpp"

namespace lrcare {

/// Data of the (generalized) continuous-time algebraic Riccati equation
///
///   A^H X E + E^H X A + C^H C - E^H X B B^H X E = 0
///
/// with sparse A (n x n), dense B (n x m), dense C (p x n) and an optional
/// sparse nonsingular E. m = 0 is the Lyapunov equation. Instances are
/// immutable once assembled.
class CareProblem {
 public:
  /// Validates dimensions and structure. field_is_real is set iff every
  /// stored imaginary part is exactly zero.
  static CareProblem assemble(SparseXc a, MatrixXc b, MatrixXc c,
                              std::optional<SparseXc> e = std::nullopt);
  static CareProblem assemble(const SparseXd& a, const MatrixXd& b, const MatrixXd& c,
                              const std::optional<SparseXd>& e = std::nullopt);

  Index n() const { return a_.rows(); }
  Index m() const { return b_.cols(); }
  Index p() const { return c_.rows(); }
  bool field_is_real() const { return real_.has_value(); }
  bool has_mass() const { return e_.has_value(); }
  bool is_lyapunov() const { return m() == 0; }

  // Typed views. The double instantiations throw ConfigError on complex data.
  template <typename Scalar>
  const SparseMatrix<Scalar>& a() const;
  template <typename Scalar>
  const Matrix<Scalar>& b() const;
  template <typename Scalar>
  const Matrix<Scalar>& c() const;
  /// Mass matrix; only valid when has_mass().
  template <typename Scalar>
  const SparseMatrix<Scalar>& e() const;

  /// E^H X, or X when there is no mass matrix.
  template <typename Scalar>
  Matrix<Scalar> apply_mass_adjoint(const Matrix<Scalar>& x) const;

  /// ||C C^H||_F, the normalization for relative residuals.
  double initial_residual_norm() const { return c_norm_; }

 private:
  struct RealData {
    SparseXd a;
    MatrixXd b, c;
    std::optional<SparseXd> e;
  };

  CareProblem() = default;

  SparseXc a_;
  MatrixXc b_, c_;
  std::optional<SparseXc> e_;
  std::optional<RealData> real_;
  double c_norm_ = 0.0;
};

template <> const SparseXc& CareProblem::a<cplx>() const;
template <> const MatrixXc& CareProblem::b<cplx>() const;
template <> const MatrixXc& CareProblem::c<cplx>() const;
template <> const SparseXc& CareProblem::e<cplx>() const;
template <> const SparseXd& CareProblem::a<double>() const;
template <> const MatrixXd& CareProblem::b<double>() const;
template <> const MatrixXd& CareProblem::c<double>() const;
template <> const SparseXd& CareProblem::e<double>() const;

}  // namespace lrcare
