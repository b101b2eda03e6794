#pragma once

namespace lrcare {

/// Wall time spent inside the large sparse solves of one step.
struct StepStats {
  double solve_seconds = 0.0;
};

}  // namespace lrcare
