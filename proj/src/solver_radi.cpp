#include "lrcare/solver_radi.hpp"

#include "expansion.hpp"

namespace lrcare {

template <typename Scalar>
IterateState<Scalar> step_radi(IterateState<Scalar> state, LinearBackend& backend, Shift mu,
                                StepStats* stats) {
  const Shift one[] = {mu};
  return step_radi_batch(std::move(state), backend, std::span<const Shift>(one), stats);
}

template <typename Scalar>
IterateState<Scalar> step_radi_batch(IterateState<Scalar> state, LinearBackend& backend,
                                      std::span<const Shift> mus, StepStats* stats) {
  const auto groups = group_shifts(mus, !is_complex_v<Scalar>);
  return detail::radi_expand_groups(std::move(state), backend, groups, stats);
}

template IterateState<double> step_radi(IterateState<double>, LinearBackend&, Shift, StepStats*);
template IterateState<cplx> step_radi(IterateState<cplx>, LinearBackend&, Shift, StepStats*);
template IterateState<double> step_radi_batch(IterateState<double>, LinearBackend&,
                                               std::span<const Shift>, StepStats*);
template IterateState<cplx> step_radi_batch(IterateState<cplx>, LinearBackend&,
                                             std::span<const Shift>, StepStats*);

}  // namespace lrcare
