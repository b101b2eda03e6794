#pragma once

#include <span>
#include <vector>

#include "lrcare/iterate_state.hpp"
#include "lrcare/linear_backend.hpp"
#include "lrcare/step_stats.hpp"

namespace lrcare {

/// One entry of a shift batch: a single shift, or a conjugate pair
/// (mu, conj(mu)) that is expanded in real arithmetic.
struct ShiftGroup {
  Shift mu;
  bool conjugate_pair = false;
};

/// Splits a shift list into groups. With real arithmetic every complex shift
/// must be followed by its conjugate; a lone complex shift is a ConfigError.
/// With complex arithmetic every shift is its own group.
std::vector<ShiftGroup> group_shifts(std::span<const Shift> mus, bool real_arithmetic);

/// The real 2p x 2p transform T = S P mapping [W conj(W)] to the interleaved
/// columns [Re w1, Im w1, ..., Re wp, Im wp].
MatrixXc conjugate_pair_transform(Index p);

/// I_p (x) [a b; -b a] for mu = a + ib.
MatrixXd rotation_block(Shift mu, Index p);

/// Expands a real state by the pair (mu, conj(mu)) with blocks
/// Zhat = (A^T - mu E^T)^{-1} R. One complex solve; all stored data stays real.
IterateState<double> expand_conjugate_pair_basic(IterateState<double> state,
                                                 LinearBackend& backend, Shift mu,
                                                 StepStats* stats = nullptr);

/// Same for feedback-shifted blocks (A^T - E^T K B^T - mu E^T)^{-1} R: the
/// complex pair step followed by a real congruence.
IterateState<double> expand_conjugate_pair_radi(IterateState<double> state,
                                                LinearBackend& backend, Shift mu,
                                                StepStats* stats = nullptr);

}  // namespace lrcare
