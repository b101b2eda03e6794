#pragma once

#include <span>

#include "lrcare/iterate_state.hpp"
#include "lrcare/linear_backend.hpp"
#include "lrcare/step_stats.hpp"

namespace lrcare {

/// RADI step: Zhat = (A^H - E^H K B^H - mu E^H)^{-1} R through SMW,
/// Y22 = (I + Zhat^H B B^H Zhat) / (2 Re mu), additive R and K updates.
template <typename Scalar>
IterateState<Scalar> step_radi(IterateState<Scalar> state, LinearBackend& backend, Shift mu,
                               StepStats* stats = nullptr);

/// Several RADI shifts against the same (K, R). Y22 block (i,k) is
/// (Zhat_i^H B B^H Zhat_k + I) / (conj(mu_i) + mu_k).
template <typename Scalar>
IterateState<Scalar> step_radi_batch(IterateState<Scalar> state, LinearBackend& backend,
                                     std::span<const Shift> mus, StepStats* stats = nullptr);

}  // namespace lrcare
