#include "lrcare/linear_backend.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SparseLU>

namespace lrcare {

namespace {

template <typename Scalar>
class SparseLuFactorization final : public Factorization<Scalar> {
 public:
  explicit SparseLuFactorization(const SparseMatrix<Scalar>& m) {
    lu_.analyzePattern(m);
    lu_.factorize(m);
  }
  bool ok() const { return lu_.info() == Eigen::Success; }

  Matrix<Scalar> solve(const Matrix<Scalar>& rhs) const override { return lu_.solve(rhs); }
  Matrix<Scalar> solve_adjoint(const Matrix<Scalar>& rhs) const override {
    return lu_.adjoint().solve(rhs);
  }

 private:
  // adjoint() is non-const in Eigen; only the condition estimator uses it
  mutable Eigen::SparseLU<SparseMatrix<Scalar>, Eigen::COLAMDOrdering<int>> lu_;
};

class SparseLuProvider final : public FactorizationProvider {
 public:
  std::unique_ptr<Factorization<double>> factorize(const SparseXd& m) const override {
    return make(m);
  }
  std::unique_ptr<Factorization<cplx>> factorize(const SparseXc& m) const override {
    return make(m);
  }

 private:
  template <typename Scalar>
  static std::unique_ptr<Factorization<Scalar>> make(const SparseMatrix<Scalar>& m) {
    auto f = std::make_unique<SparseLuFactorization<Scalar>>(m);
    if (!f->ok()) return nullptr;
    return f;
  }
};

template <typename Scalar>
double one_norm(const SparseMatrix<Scalar>& m) {
  double best = 0.0;
  for (Index j = 0; j < m.outerSize(); ++j) {
    double s = 0.0;
    for (typename SparseMatrix<Scalar>::InnerIterator it(m, j); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

// Hager/Higham estimate of ||M^{-1}||_1 using solves with M and M^H.
template <typename Scalar>
double inverse_one_norm_estimate(const Factorization<Scalar>& f, Index n) {
  using Vec = Matrix<Scalar>;
  Vec x = Vec::Constant(n, 1, Scalar(1.0 / static_cast<double>(n)));
  double est = 0.0;
  Index last = -1;
  for (int iter = 0; iter < 5; ++iter) {
    Vec y = f.solve(x);
    const double norm_y = y.cwiseAbs().sum();
    if (!std::isfinite(norm_y)) return std::numeric_limits<double>::infinity();
    if (iter > 0 && norm_y <= est) break;
    est = norm_y;
    Vec sign(n, 1);
    for (Index i = 0; i < n; ++i) {
      const double a = std::abs(y(i));
      sign(i) = a > 0.0 ? y(i) / a : Scalar(1.0);
    }
    Vec z = f.solve_adjoint(sign);
    Index j = 0, col = 0;
    z.cwiseAbs().maxCoeff(&j, &col);
    if (j == last) break;
    last = j;
    x.setZero();
    x(j) = Scalar(1.0);
  }
  // Alternating test vector guards against the estimator's known failure cases.
  Vec alt(n, 1);
  for (Index i = 0; i < n; ++i) {
    const double s = (i % 2 == 0) ? 1.0 : -1.0;
    alt(i) = Scalar(s * (1.0 + static_cast<double>(i) / std::max<Index>(n - 1, 1)));
  }
  const double alt_est = 2.0 * f.solve(alt).cwiseAbs().sum() / (3.0 * static_cast<double>(n));
  if (!std::isfinite(alt_est)) return std::numeric_limits<double>::infinity();
  return std::max(est, alt_est);
}

template <typename Scalar>
SparseMatrix<Scalar> shifted_matrix(const CareProblem& problem, Shift mu) {
  const SparseMatrix<Scalar>& a = problem.a<Scalar>();
  Scalar s;
  if constexpr (is_complex_v<Scalar>) {
    s = mu;
  } else {
    s = mu.real();
  }
  SparseMatrix<Scalar> m;
  if (problem.has_mass()) {
    m = SparseMatrix<Scalar>(a.adjoint()) - s * SparseMatrix<Scalar>(problem.e<Scalar>().adjoint());
  } else {
    SparseMatrix<Scalar> eye(a.rows(), a.cols());
    eye.setIdentity();
    m = SparseMatrix<Scalar>(a.adjoint()) - s * eye;
  }
  m.makeCompressed();
  return m;
}

}  // namespace

std::shared_ptr<const FactorizationProvider> make_sparse_lu_provider() {
  return std::make_shared<SparseLuProvider>();
}

LinearBackend::LinearBackend(std::shared_ptr<const CareProblem> problem, std::size_t capacity,
                             std::shared_ptr<const FactorizationProvider> provider)
    : problem_(std::move(problem)),
      provider_(provider ? std::move(provider) : make_sparse_lu_provider()),
      capacity_(std::max<std::size_t>(capacity, 1)) {
  if (!problem_) throw ConfigError("LinearBackend needs a problem");
}

template <typename Scalar>
std::shared_ptr<const Factorization<Scalar>> LinearBackend::build(Shift mu) const {
  const SparseMatrix<Scalar> m = shifted_matrix<Scalar>(*problem_, mu);
  std::shared_ptr<const Factorization<Scalar>> f = provider_->factorize(m);
  if (!f) throw ShiftRejected(mu, "shifted matrix is singular for shift " + format_shift(mu));
  const double inv_norm = inverse_one_norm_estimate(*f, m.rows());
  const double rcond = 1.0 / (one_norm(m) * inv_norm);
  if (!(rcond >= kRcondThreshold))
    throw ShiftRejected(mu, "shift " + format_shift(mu) +
                                " is too close to an eigenvalue (rcond estimate " +
                                std::to_string(rcond) + ")");
  return f;
}

template <typename Scalar>
std::shared_ptr<const Factorization<Scalar>> LinearBackend::factorization(Shift mu) {
  const Key key{mu.real(), mu.imag(), is_complex_v<Scalar>};
  std::promise<Handle> promise;
  std::shared_future<Handle> future;
  bool builder = false;
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      ++it->second.hits;
      lru_.splice(lru_.begin(), lru_, it->second.lru);
      future = it->second.handle;
    } else {
      future = promise.get_future().share();
      lru_.push_front(key);
      cache_.emplace(key, Entry{future, 0, lru_.begin()});
      builder = true;
      while (cache_.size() > capacity_) {
        cache_.erase(lru_.back());
        lru_.pop_back();
      }
    }
  }
  if (builder) {
    try {
      auto f = build<Scalar>(mu);
      ++built_;
      promise.set_value(Handle(std::move(f)));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) {
        lru_.erase(it->second.lru);
        cache_.erase(it);
      }
    }
  }
  return std::get<std::shared_ptr<const Factorization<Scalar>>>(future.get());
}

template <typename Scalar>
Matrix<Scalar> LinearBackend::shifted_solve(Shift mu, const Matrix<Scalar>& rhs) {
  if (rhs.rows() != problem_->n())
    throw ConfigError("right-hand side has " + std::to_string(rhs.rows()) + " rows, expected " +
                      std::to_string(problem_->n()));
  if (!(mu.real() > 0.0))
    throw ConfigError("shift " + format_shift(mu) + " is not in the open right half plane");
  if constexpr (!is_complex_v<Scalar>) {
    if (mu.imag() != 0.0)
      throw ConfigError("complex shift " + format_shift(mu) + " needs complex arithmetic");
    ++real_solves_;
  } else {
    ++complex_solves_;
  }
  auto f = factorization<Scalar>(mu);
  if (rhs.cols() == 0) return Matrix<Scalar>(rhs.rows(), 0);
  return f->solve(rhs);
}

template <typename Scalar>
Matrix<Scalar> LinearBackend::smw_solve(Shift mu, const Matrix<Scalar>& k,
                                        const Matrix<Scalar>& rhs) {
  const Index m = problem_->m();
  if (k.rows() != problem_->n() || k.cols() != m)
    throw ConfigError("feedback matrix has wrong dimensions");
  if (m == 0) return shifted_solve(mu, rhs);
  const Index p = rhs.cols();
  Matrix<Scalar> stacked(problem_->n(), p + m);
  stacked << rhs, k;
  const Matrix<Scalar> sol = shifted_solve(mu, stacked);
  const auto l = sol.leftCols(p);
  const auto nmat = sol.rightCols(m);
  const Matrix<Scalar>& b = problem_->b<Scalar>();
  const Matrix<Scalar> small = Matrix<Scalar>::Identity(m, m) - b.adjoint() * nmat;
  Eigen::PartialPivLU<Matrix<Scalar>> lu(small);
  if (!(lu.rcond() >= kRcondThreshold))
    throw ShiftRejected(mu, "capacitance matrix I - B^H N is singular for shift " +
                                format_shift(mu));
  return l + nmat * lu.solve(b.adjoint() * l);
}

void LinearBackend::clear_cache() {
  std::lock_guard lock(mutex_);
  cache_.clear();
  lru_.clear();
}

std::size_t LinearBackend::cached() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

long LinearBackend::reuse_count(Shift mu, bool complex_arithmetic) const {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(Key{mu.real(), mu.imag(), complex_arithmetic});
  return it == cache_.end() ? -1 : it->second.hits;
}

void LinearBackend::reset_counters() {
  built_ = 0;
  real_solves_ = 0;
  complex_solves_ = 0;
}

template MatrixXd LinearBackend::shifted_solve<double>(Shift, const MatrixXd&);
template MatrixXc LinearBackend::shifted_solve<cplx>(Shift, const MatrixXc&);
template MatrixXd LinearBackend::smw_solve<double>(Shift, const MatrixXd&, const MatrixXd&);
template MatrixXc LinearBackend::smw_solve<cplx>(Shift, const MatrixXc&, const MatrixXc&);

}  // namespace lrcare
