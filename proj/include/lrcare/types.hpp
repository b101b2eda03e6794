#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace lrcare {

using cplx = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;

using MatrixXd = Matrix<double>;
using MatrixXc = Matrix<cplx>;
using VectorXd = Eigen::VectorXd;
using VectorXc = Eigen::VectorXcd;
using SparseXd = SparseMatrix<double>;
using SparseXc = SparseMatrix<cplx>;

using Index = Eigen::Index;

/// A shift (pole) of the rational Krylov space. Shifts used for expansion
/// must lie in the open right half plane.
using Shift = cplx;

template <typename Scalar>
inline constexpr bool is_complex_v = false;
template <>
inline constexpr bool is_complex_v<cplx> = true;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for malformed input files and inconsistent problem dimensions.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Thrown for invalid solver or shift configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The shifted matrix is (numerically) singular for this shift. Callers may
/// recover by choosing a different shift.
class ShiftRejected : public Error {
 public:
  ShiftRejected(Shift shift, const std::string& what) : Error(what), shift_(shift) {}
  Shift shift() const { return shift_; }

 private:
  Shift shift_;
};

/// The small Hermitian middle factor lost positive definiteness.
class Breakdown : public Error {
 public:
  Breakdown(Shift shift, const std::string& what) : Error(what), shift_(shift) {}
  Shift shift() const { return shift_; }

 private:
  Shift shift_;
};

std::string format_shift(Shift s);

}  // namespace lrcare
