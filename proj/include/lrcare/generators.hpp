#pragma once

#include <cstdint>

#include "lrcare/problem.hpp"

namespace lrcare {

/// 5-point finite-difference discretization of
///   -Laplace(u) + cx * u_x + cy * u_y
/// on the unit square with grid x grid interior points (n = grid^2),
/// negated so the matrix is stable. B and C are random sparse with the
/// given density (at least one nonzero per column/row).
CareProblem convection_diffusion_problem(Index grid, Index m, Index p, std::uint64_t seed,
                                         double cx = 10.0, double cy = 100.0,
                                         double density = 0.1);

/// Random sparse stable A = N - shift I with a Gershgorin margin, dense
/// random B, C. With `complex_data` the entries are complex.
CareProblem random_stable_problem(Index n, Index m, Index p, std::uint64_t seed,
                                  bool complex_data = false, double density = 0.1);

/// Adds a random sparse symmetric positive definite mass matrix to `base`.
CareProblem with_random_spd_mass(const CareProblem& base, std::uint64_t seed);

}  // namespace lrcare
