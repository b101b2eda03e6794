#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "lrcare/iterate_state.hpp"

namespace lrcare {

/// Supplies shift batches to the solver loop.
///
/// fixed: entries of a list in order, optionally cycling.
/// residual-projection: projects the Hamiltonian [A, BB^H; C^H C, -A^H]
/// (with the pencil diag(E, E^H) for generalized problems) onto the span of
/// the last `window` residual factors and returns mirrored stable
/// eigenvalues of largest magnitude.
///
/// On real problems complex shifts are always emitted as adjacent conjugate
/// pairs, so a request for `count` shifts may return count + 1.
class ShiftStrategy {
 public:
  enum class Kind { fixed, residual_projection };

  static ShiftStrategy fixed(std::vector<Shift> shifts, bool cyclic = false);
  static ShiftStrategy residual_projection(Index window = 1);

  Kind kind() const { return kind_; }
  Index window() const { return window_; }
  const std::vector<Shift>& list() const { return list_; }

  /// Observes the current residual factor of `state` and returns the next
  /// shifts. Throws ConfigError when a non-cyclic list is exhausted.
  template <typename Scalar>
  std::vector<Shift> next(const IterateState<Scalar>& state, const CareProblem& problem,
                          Index count);

  /// True when a fixed, non-cyclic list has no entries left.
  bool exhausted() const;

 private:
  ShiftStrategy() = default;

  std::vector<Shift> next_fixed(Index count, bool real_problem);
  std::vector<Shift> next_projection(const MatrixXc& r, const CareProblem& problem, Index count);

  Kind kind_ = Kind::fixed;
  std::vector<Shift> list_;
  bool cyclic_ = false;
  std::size_t position_ = 0;
  Index window_ = 1;
  std::vector<MatrixXc> history_;
  std::vector<Shift> last_;
};

/// Projected-Hamiltonian shifts for the basis spanned by `basis` (n x k,
/// need not be orthonormal). Returns up to `count` mirrored stable
/// eigenvalues ordered by decreasing magnitude, conjugate-paired when the
/// problem is real.
std::vector<Shift> projected_hamiltonian_shifts(const CareProblem& problem, const MatrixXc& basis,
                                                Index count);

/// Shift files hold one shift per line: real and imaginary part separated by
/// whitespace. Blank lines and '#' comments are skipped.
std::vector<Shift> read_shift_file(const std::filesystem::path& path);
std::vector<Shift> parse_shifts(std::istream& in, const std::string& source = "<stream>");
void write_shift_file(const std::filesystem::path& path, const std::vector<Shift>& shifts);

}  // namespace lrcare
