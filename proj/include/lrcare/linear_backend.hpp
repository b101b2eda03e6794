#pragma once

#include <atomic>
#include <cstdint>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <variant>

#include "lrcare/problem.hpp"

namespace lrcare {

/// A factorized shifted matrix M = A^H - mu E^H. Immutable once built; solves
/// may run concurrently from several threads.
template <typename Scalar>
class Factorization {
 public:
  virtual ~Factorization() = default;
  virtual Matrix<Scalar> solve(const Matrix<Scalar>& rhs) const = 0;
  /// Solves with M^H. Used by the condition estimator.
  virtual Matrix<Scalar> solve_adjoint(const Matrix<Scalar>& rhs) const = 0;
};

/// Builds factorizations. The default provider uses sparse LU; other
/// providers can be plugged into LinearBackend.
class FactorizationProvider {
 public:
  virtual ~FactorizationProvider() = default;
  /// Returns nullptr when the matrix is structurally or exactly singular.
  virtual std::unique_ptr<Factorization<double>> factorize(const SparseXd& m) const = 0;
  virtual std::unique_ptr<Factorization<cplx>> factorize(const SparseXc& m) const = 0;
};

std::shared_ptr<const FactorizationProvider> make_sparse_lu_provider();

/// Reciprocal 1-norm condition estimate below which a shift is rejected.
inline constexpr double kRcondThreshold = 1e-14;

/// Shifted sparse solves (A^H - mu E^H) X = RHS for one problem, with an LRU
/// cache of factorizations keyed by the shift.
///
/// Thread safety: solve() may be called concurrently. Concurrent requests for
/// the same uncached shift build exactly one factorization.
class LinearBackend {
 public:
  explicit LinearBackend(std::shared_ptr<const CareProblem> problem, std::size_t capacity = 8,
                         std::shared_ptr<const FactorizationProvider> provider = nullptr);

  const CareProblem& problem() const { return *problem_; }
  std::shared_ptr<const CareProblem> problem_ptr() const { return problem_; }

  /// Solves (A^H - mu E^H) X = rhs. The real instantiation requires a real
  /// problem and a real shift.
  template <typename Scalar>
  Matrix<Scalar> shifted_solve(Shift mu, const Matrix<Scalar>& rhs);

  /// (A^H - K B^H - mu E^H)^{-1} rhs through the Sherman-Morrison-Woodbury
  /// identity: one sparse solve with [rhs K] followed by an m x m dense solve.
  template <typename Scalar>
  Matrix<Scalar> smw_solve(Shift mu, const Matrix<Scalar>& k, const Matrix<Scalar>& rhs);

  void clear_cache();

  std::size_t capacity() const { return capacity_; }
  std::size_t cached() const;
  /// Number of cache hits on the entry for mu since it was inserted; -1 when
  /// no entry exists.
  long reuse_count(Shift mu, bool complex_arithmetic) const;

  std::uint64_t factorizations_built() const { return built_.load(); }
  std::uint64_t real_solves() const { return real_solves_.load(); }
  std::uint64_t complex_solves() const { return complex_solves_.load(); }
  void reset_counters();

 private:
  using Key = std::tuple<double, double, bool>;
  using Handle = std::variant<std::shared_ptr<const Factorization<double>>,
                              std::shared_ptr<const Factorization<cplx>>>;
  struct Entry {
    std::shared_future<Handle> handle;
    long hits = 0;
    std::list<Key>::iterator lru;
  };

  template <typename Scalar>
  std::shared_ptr<const Factorization<Scalar>> factorization(Shift mu);
  template <typename Scalar>
  std::shared_ptr<const Factorization<Scalar>> build(Shift mu) const;

  std::shared_ptr<const CareProblem> problem_;
  std::shared_ptr<const FactorizationProvider> provider_;
  std::size_t capacity_;

  mutable std::mutex mutex_;
  std::map<Key, Entry> cache_;
  std::list<Key> lru_;  // front = most recent

  std::atomic<std::uint64_t> built_{0};
  std::atomic<std::uint64_t> real_solves_{0};
  std::atomic<std::uint64_t> complex_solves_{0};
};

}  // namespace lrcare
