#include "lrcare/realify.hpp"

#include <cmath>

#include "expansion.hpp"

namespace lrcare {

std::vector<ShiftGroup> group_shifts(std::span<const Shift> mus, bool real_arithmetic) {
  std::vector<ShiftGroup> groups;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const Shift mu = mus[i];
    if (!real_arithmetic || mu.imag() == 0.0) {
      groups.push_back({mu, false});
      continue;
    }
    const bool paired = i + 1 < mus.size() &&
                        std::abs(mus[i + 1] - std::conj(mu)) <= 1e-12 * std::abs(mu);
    if (!paired)
      throw ConfigError("complex shift " + format_shift(mu) +
                        " on a real problem must be followed by its conjugate");
    groups.push_back({mu, true});
    ++i;
  }
  return groups;
}

MatrixXc conjugate_pair_transform(Index p) {
  const cplx i1(0.0, 1.0);
  MatrixXc s = MatrixXc::Zero(2 * p, 2 * p);
  s.topLeftCorner(p, p).diagonal().setConstant(0.5);
  s.topRightCorner(p, p).diagonal().setConstant(-0.5 * i1);
  s.bottomLeftCorner(p, p).diagonal().setConstant(0.5);
  s.bottomRightCorner(p, p).diagonal().setConstant(0.5 * i1);
  MatrixXc perm = MatrixXc::Zero(2 * p, 2 * p);
  for (Index k = 0; k < p; ++k) {
    perm(k, 2 * k) = 1.0;
    perm(p + k, 2 * k + 1) = 1.0;
  }
  return s * perm;
}

MatrixXd rotation_block(Shift mu, Index p) {
  MatrixXd d = MatrixXd::Zero(2 * p, 2 * p);
  for (Index k = 0; k < p; ++k) {
    d(2 * k, 2 * k) = mu.real();
    d(2 * k, 2 * k + 1) = mu.imag();
    d(2 * k + 1, 2 * k) = -mu.imag();
    d(2 * k + 1, 2 * k + 1) = mu.real();
  }
  return d;
}

namespace {

std::vector<ShiftGroup> pair_group(Shift mu) {
  if (mu.imag() == 0.0) throw ConfigError("conjugate pair needs a non-real shift");
  return {{mu, true}};
}

}  // namespace

IterateState<double> expand_conjugate_pair_basic(IterateState<double> state,
                                                 LinearBackend& backend, Shift mu,
                                                 StepStats* stats) {
  return detail::basic_expand_groups(std::move(state), backend, pair_group(mu), stats);
}

IterateState<double> expand_conjugate_pair_radi(IterateState<double> state,
                                                LinearBackend& backend, Shift mu,
                                                StepStats* stats) {
  return detail::radi_expand_groups(std::move(state), backend, pair_group(mu), stats);
}

}  // namespace lrcare
