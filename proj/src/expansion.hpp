#pragma once

// Shared machinery behind the single-shift, batched and realified steps.

#include <span>
#include <vector>

#include "lrcare/iterate_state.hpp"
#include "lrcare/linear_backend.hpp"
#include "lrcare/realify.hpp"
#include "lrcare/step_stats.hpp"

namespace lrcare::detail {

template <typename Scalar>
IterateState<Scalar> basic_expand_groups(IterateState<Scalar> state, LinearBackend& backend,
                                         const std::vector<ShiftGroup>& groups, StepStats* stats);

template <typename Scalar>
IterateState<Scalar> radi_expand_groups(IterateState<Scalar> state, LinearBackend& backend,
                                        const std::vector<ShiftGroup>& groups, StepStats* stats);

}  // namespace lrcare::detail
