#pragma once

#include <filesystem>
#include <vector>

#include "lrcare/problem.hpp"

namespace lrcare {

/// New basis blocks together with their coupling to the existing block
/// rational Arnoldi decomposition
///
///   A^H [C^H Z Zhat] [0; I] = [C^H Z Zhat] [h U1; H U2; 0 D]
///
/// (E^H enters on the right-hand side for generalized problems).
template <typename Scalar>
struct ExpansionBlock {
  Matrix<Scalar> zhat;  // n x q
  Matrix<Scalar> u1;    // p x q
  Matrix<Scalar> u2;    // k x q, k = current column count
  Matrix<Scalar> d;     // q x q upper quasi-triangular, eigenvalues in C+
  std::vector<Shift> shifts;
};

/// Low-rank iterate X = Z Y Z^H with Y^{-1} = Yinv = G^H G.
///
/// Besides the factors the state carries the top row h and the square part
/// H of the decomposition, the residual factor R (R(X) = R R^H), the gain
/// K = X B and B^H Z. In gain-only mode only R and K are kept.
template <typename Scalar>
class IterateState {
 public:
  static IterateState initial(const CareProblem& problem, bool gain_only = false);

  Index n() const { return r_.rows(); }
  Index p() const { return r_.cols(); }
  Index m() const { return k_.cols(); }
  /// Number of basis columns, including discarded ones in gain-only mode.
  Index columns() const { return columns_; }
  /// Number of shifts applied so far.
  Index steps() const { return static_cast<Index>(shifts_.size()); }
  bool gain_only() const { return gain_only_; }

  const Matrix<Scalar>& z() const { return z_; }
  const Matrix<Scalar>& yinv() const { return yinv_; }
  const Matrix<Scalar>& g() const { return g_; }
  const Matrix<Scalar>& h() const { return h_; }
  const Matrix<Scalar>& hminus() const { return hminus_; }
  const Matrix<Scalar>& r() const { return r_; }
  const Matrix<Scalar>& k() const { return k_; }
  const Matrix<Scalar>& bz() const { return bz_; }
  const std::vector<Shift>& shifts() const { return shifts_; }

  /// Y x, applied through the Cholesky factor of Yinv.
  Matrix<Scalar> apply_y(const Matrix<Scalar>& x) const;

  /// Enables Cholesky and decomposition consistency checks after every
  /// expansion.
  bool check_invariants = false;

  template <typename S>
  friend IterateState<S> expand(IterateState<S> state, const CareProblem& problem,
                                const ExpansionBlock<S>& block);
  template <typename S>
  friend IterateState<S> expand_block_diagonal(IterateState<S> state, const CareProblem& problem,
                                               const Matrix<S>& zhat, const Matrix<S>& bzhat,
                                               const Matrix<S>& y22, const Matrix<S>& u1,
                                               const Matrix<S>& d,
                                               const std::vector<Shift>& shifts);
  template <typename S>
  friend IterateState<S> load_state(const std::filesystem::path& dir);

 private:
  void verify(const CareProblem& problem) const;

  Matrix<Scalar> z_, yinv_, g_, h_, hminus_, r_, k_, bz_;
  std::vector<Shift> shifts_;
  Index columns_ = 0;
  bool gain_only_ = false;
};

/// General expansion. Solves H^H Y12 + Y12 D = Z^H B B^H Zhat + h^H U1 - Yinv U2
/// and Y22 D + D^H Y22 = Zhat^H B B^H Zhat + U1^H U1 - Y12^H U2 - U2^H Y12,
/// appends the blocks, and recomputes R = C^H + E^H Z Y h^H and K = Z Y Z^H B.
template <typename Scalar>
IterateState<Scalar> expand(IterateState<Scalar> state, const CareProblem& problem,
                            const ExpansionBlock<Scalar>& block);

/// Expansion for bases where the coupling block Y12 vanishes (feedback-shifted
/// solves). Yinv grows block diagonally by y22; R and K get additive updates
///   R += E^H Zhat y22^{-1} U1^H,  K += Zhat y22^{-1} (B^H Zhat)^H.
/// `bzhat` is B^H Zhat. In full mode the decomposition (h, H) is extended
/// with U2 = Y (h^H U1 + Z^H B B^H Zhat).
template <typename Scalar>
IterateState<Scalar> expand_block_diagonal(IterateState<Scalar> state, const CareProblem& problem,
                                           const Matrix<Scalar>& zhat, const Matrix<Scalar>& bzhat,
                                           const Matrix<Scalar>& y22, const Matrix<Scalar>& u1,
                                           const Matrix<Scalar>& d,
                                           const std::vector<Shift>& shifts);

/// ||R^H R||_F, which equals the Frobenius norm of the Riccati residual.
template <typename Scalar>
double residual_norm(const IterateState<Scalar>& state);

/// Largest n for which dense assembly is allowed.
inline constexpr Index kDenseLimit = 5000;

/// X = Z Yinv^{-1} Z^H as a dense Hermitian matrix.
template <typename Scalar>
Matrix<Scalar> assemble_dense(const IterateState<Scalar>& state);

template <typename Scalar>
struct CholeskyForm {
  Matrix<Scalar> factor;  // Z G^{-1}, so that X = factor factor^H
  Matrix<Scalar> g;       // upper triangular, Yinv = G^H G
};

template <typename Scalar>
CholeskyForm<Scalar> cholesky_form(const IterateState<Scalar>& state);

/// Relative residual of A^H Z - C^H h - E^H Z H. Zero-column states give 0.
template <typename Scalar>
double brad_residual(const IterateState<Scalar>& state, const CareProblem& problem);

/// Writes Z, Yinv, h, Hminus, R, K and BZ as Matrix Market files plus
/// shifts.txt and state.manifest into `dir`.
template <typename Scalar>
void save_state(const IterateState<Scalar>& state, const std::filesystem::path& dir);

template <typename Scalar>
IterateState<Scalar> load_state(const std::filesystem::path& dir);

}  // namespace lrcare
