#include "lrcare/generators.hpp"

#include <cmath>
#include <random>

namespace lrcare {

namespace {

using Triplet = Eigen::Triplet<double>;

// Sparse random dense-stored matrix with at least one nonzero per column.
MatrixXd sparse_random(Index rows, Index cols, double density, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<Index> pick(0, rows - 1);
  MatrixXd m = MatrixXd::Zero(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i)
      if (unit(rng) < density) m(i, j) = normal(rng);
    m(pick(rng), j) = normal(rng);
  }
  return m;
}

}  // namespace

CareProblem convection_diffusion_problem(Index grid, Index m, Index p, std::uint64_t seed,
                                         double cx, double cy, double density) {
  if (grid < 2) throw ConfigError("grid must have at least 2 points per direction");
  const Index n = grid * grid;
  const double h = 1.0 / static_cast<double>(grid + 1);
  const double d = 1.0 / (h * h);
  std::vector<Triplet> t;
  t.reserve(5 * n);
  auto id = [grid](Index i, Index j) { return j * grid + i; };
  for (Index j = 0; j < grid; ++j)
    for (Index i = 0; i < grid; ++i) {
      const Index r = id(i, j);
      // negated 5-point stencil of -Laplace(u) + cx u_x + cy u_y
      t.emplace_back(r, r, -4.0 * d);
      if (i > 0) t.emplace_back(r, id(i - 1, j), d + cx / (2.0 * h));
      if (i + 1 < grid) t.emplace_back(r, id(i + 1, j), d - cx / (2.0 * h));
      if (j > 0) t.emplace_back(r, id(i, j - 1), d + cy / (2.0 * h));
      if (j + 1 < grid) t.emplace_back(r, id(i, j + 1), d - cy / (2.0 * h));
    }
  SparseXd a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  std::mt19937_64 rng(seed);
  const MatrixXd b = sparse_random(n, m, density, rng);
  const MatrixXd c = sparse_random(n, p, density, rng).transpose();
  return CareProblem::assemble(a, b, c);
}

CareProblem random_stable_problem(Index n, Index m, Index p, std::uint64_t seed,
                                  bool complex_data, double density) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&]() -> cplx {
    return complex_data ? cplx(normal(rng), normal(rng)) : cplx(normal(rng), 0.0);
  };

  std::vector<Eigen::Triplet<cplx>> t;
  VectorXd radius = VectorXd::Zero(n);
  VectorXc diag = VectorXc::Zero(n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      if (i != j && unit(rng) >= density) continue;
      const cplx v = draw();
      if (i == j) {
        diag(i) = v;
      } else {
        t.emplace_back(i, j, v);
        radius(i) += std::abs(v);
      }
    }
  double bound = 0.0;
  for (Index i = 0; i < n; ++i) bound = std::max(bound, diag(i).real() + radius(i));
  const double shift = bound + 1.0;
  for (Index i = 0; i < n; ++i) t.emplace_back(i, i, diag(i) - shift);
  SparseXc a(n, n);
  a.setFromTriplets(t.begin(), t.end());

  MatrixXc b(n, m), c(p, n);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) b(i, j) = draw();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < p; ++i) c(i, j) = draw();
  return CareProblem::assemble(std::move(a), std::move(b), std::move(c));
}

CareProblem with_random_spd_mass(const CareProblem& base, std::uint64_t seed) {
  const Index n = base.n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // symmetric, strictly diagonally dominant with positive diagonal
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 + unit(rng));
    if (i + 1 < n) {
      const double v = -0.5 * unit(rng);
      t.emplace_back(i, i + 1, v);
      t.emplace_back(i + 1, i, v);
    }
  }
  SparseXd e(n, n);
  e.setFromTriplets(t.begin(), t.end());
  if (base.field_is_real())
    return CareProblem::assemble(base.a<double>(), base.b<double>(), base.c<double>(), e);
  return CareProblem::assemble(base.a<cplx>(), base.b<cplx>(), base.c<cplx>(),
                               SparseXc(e.cast<cplx>()));
}

}  // namespace lrcare
