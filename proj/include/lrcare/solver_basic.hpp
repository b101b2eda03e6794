#pragma once

#include <span>

#include "lrcare/iterate_state.hpp"
#include "lrcare/linear_backend.hpp"
#include "lrcare/step_stats.hpp"

namespace lrcare {

/// Expands the basis with Zhat = (A^H - mu E^H)^{-1} R, i.e. U1 = I,
/// U2 = Y h^H and D = mu I.
template <typename Scalar>
IterateState<Scalar> step_basic(IterateState<Scalar> state, LinearBackend& backend, Shift mu,
                                StepStats* stats = nullptr);

/// Adds all shifts at once; the shifted solves run concurrently. On real
/// arithmetic, complex shifts must come as adjacent conjugate pairs and are
/// realified.
template <typename Scalar>
IterateState<Scalar> step_basic_batch(IterateState<Scalar> state, LinearBackend& backend,
                                      std::span<const Shift> mus, StepStats* stats = nullptr);

}  // namespace lrcare
