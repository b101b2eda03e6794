#include "lrcare/problem.hpp"

#include <Eigen/QR>

#include "lrcare/log.hpp"

namespace lrcare {

namespace {

// Dense rank checks are skipped above this size.
constexpr Index kRankCheckLimit = 2000;

bool all_real(const SparseXc& m) {
  for (Index j = 0; j < m.outerSize(); ++j)
    for (SparseXc::InnerIterator it(m, j); it; ++it)
      if (it.value().imag() != 0.0) return false;
  return true;
}

bool all_real(const MatrixXc& m) {
  return (m.imag().array() == 0.0).all();
}

std::string dims(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

Index numerical_rank(const MatrixXc& m) {
  Eigen::ColPivHouseholderQR<MatrixXc> qr(m);
  return qr.rank();
}

}  // namespace

CareProblem CareProblem::assemble(SparseXc a, MatrixXc b, MatrixXc c, std::optional<SparseXc> e) {
  const Index n = a.rows();
  if (a.cols() != n) throw InputError("A must be square, got " + dims(a.rows(), a.cols()));
  if (n == 0) throw InputError("A must not be empty");
  if (b.size() == 0) b.resize(n, 0);
  if (b.rows() != n) throw InputError("B must have " + std::to_string(n) + " rows, got " +
                                      dims(b.rows(), b.cols()));
  if (c.cols() != n) throw InputError("C must have " + std::to_string(n) + " columns, got " +
                                      dims(c.rows(), c.cols()));
  if (c.rows() < 1) throw InputError("C must have at least one row");
  if (c.rows() > n) throw InputError("C has more rows than columns (" + dims(c.rows(), c.cols()) +
                                     "), it cannot have full row rank");
  if (b.cols() > n) throw InputError("B has more columns than rows (" + dims(b.rows(), b.cols()) +
                                     "), it cannot have full column rank");
  if (e) {
    if (e->rows() != n || e->cols() != n)
      throw InputError("E must be " + dims(n, n) + ", got " + dims(e->rows(), e->cols()));
    std::vector<char> row_used(n, 0), col_used(n, 0);
    for (Index j = 0; j < e->outerSize(); ++j) {
      for (SparseXc::InnerIterator it(*e, j); it; ++it) {
        if (it.value() != cplx(0.0)) {
          row_used[it.row()] = 1;
          col_used[it.col()] = 1;
        }
      }
    }
    for (Index i = 0; i < n; ++i) {
      if (!row_used[i] || !col_used[i])
        throw InputError("E is structurally singular (empty row or column " + std::to_string(i + 1) +
                         ")");
    }
  }

  if (n <= kRankCheckLimit) {
    if (b.cols() > 0 && numerical_rank(b) < b.cols())
      throw InputError("B does not have full column rank");
    if (numerical_rank(c) < c.rows()) throw InputError("C does not have full row rank");
  } else {
    warn("n = " + std::to_string(n) + " exceeds " + std::to_string(kRankCheckLimit) +
         ", skipping rank checks on B and C");
  }

  a.makeCompressed();
  CareProblem prob;
  const bool real = all_real(a) && all_real(b) && all_real(c) && (!e || all_real(*e));
  if (real) {
    RealData rd;
    rd.a = a.real();
    rd.b = b.real();
    rd.c = c.real();
    if (e) rd.e = SparseXd(e->real());
    prob.real_ = std::move(rd);
  }
  prob.a_ = std::move(a);
  prob.b_ = std::move(b);
  prob.c_ = std::move(c);
  prob.e_ = std::move(e);
  prob.c_norm_ = (prob.c_ * prob.c_.adjoint()).norm();
  return prob;
}

CareProblem CareProblem::assemble(const SparseXd& a, const MatrixXd& b, const MatrixXd& c,
                                  const std::optional<SparseXd>& e) {
  std::optional<SparseXc> ec;
  if (e) ec = SparseXc(e->cast<cplx>());
  MatrixXc bc = b.cast<cplx>();
  if (b.size() == 0) bc.resize(a.rows(), 0);
  return assemble(SparseXc(a.cast<cplx>()), std::move(bc), c.cast<cplx>(), std::move(ec));
}

namespace {

[[noreturn]] void not_real() {
  throw ConfigError("problem has complex data; real arithmetic is not available");
}

}  // namespace

template <>
const SparseXc& CareProblem::a<cplx>() const { return a_; }
template <>
const MatrixXc& CareProblem::b<cplx>() const { return b_; }
template <>
const MatrixXc& CareProblem::c<cplx>() const { return c_; }
template <>
const SparseXc& CareProblem::e<cplx>() const {
  if (!e_) throw ConfigError("problem has no mass matrix");
  return *e_;
}

template <>
const SparseXd& CareProblem::a<double>() const {
  if (!real_) not_real();
  return real_->a;
}
template <>
const MatrixXd& CareProblem::b<double>() const {
  if (!real_) not_real();
  return real_->b;
}
template <>
const MatrixXd& CareProblem::c<double>() const {
  if (!real_) not_real();
  return real_->c;
}
template <>
const SparseXd& CareProblem::e<double>() const {
  if (!real_) not_real();
  if (!real_->e) throw ConfigError("problem has no mass matrix");
  return *real_->e;
}

template <typename Scalar>
Matrix<Scalar> CareProblem::apply_mass_adjoint(const Matrix<Scalar>& x) const {
  if (!has_mass()) return x;
  return e<Scalar>().adjoint() * x;
}

template MatrixXd CareProblem::apply_mass_adjoint<double>(const MatrixXd&) const;
template MatrixXc CareProblem::apply_mass_adjoint<cplx>(const MatrixXc&) const;

}  // namespace lrcare
