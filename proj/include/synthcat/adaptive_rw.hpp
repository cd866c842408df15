#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "synthcat/distributions.hpp"
#include "synthcat/errors.hpp"
#include "synthcat/rng.hpp"

namespace synthcat {

// Scalar random-walk Metropolis state with Robbins-Monro scale adaptation.
// The scale adapts in batches of 50 proposals while `adapting` is true and is
// frozen afterward, so post-burn-in draws target the exact conditional.
struct AdaptiveStepState {
  double log_scale = 0.0;
  double target_accept = 0.44;
  std::uint64_t iteration = 0;
  int batch_accepts = 0;
  std::uint64_t batch_count = 0;
  bool adapting = true;

  static constexpr int batch_size = 50;
};

// One Metropolis update of `current` against `logdensity`. Returns the new
// point and whether the proposal was accepted; `step` is advanced in place.
template <typename LogDensity>
std::pair<double, bool> adaptive_rw_update(LogDensity&& logdensity,
                                           double current,
                                           AdaptiveStepState& step,
                                           RngStream& rng) {
  double lp_current = logdensity(current);
  if (std::isnan(lp_current)) {
    throw NumericError("adaptive_rw_update: log density is NaN at current point");
  }
  double proposal = current + std::exp(step.log_scale) * sample_normal(rng);
  double lp_proposal = logdensity(proposal);
  bool accepted = false;
  if (!std::isnan(lp_proposal)) {
    double log_ratio = lp_proposal - lp_current;
    if (log_ratio >= 0.0) {
      accepted = true;
    } else {
      accepted = rng.next_double() < std::exp(log_ratio);
    }
  }
  double next = accepted ? proposal : current;

  step.iteration += 1;
  if (accepted) step.batch_accepts += 1;
  if (step.iteration % AdaptiveStepState::batch_size == 0) {
    if (step.adapting) {
      step.batch_count += 1;
      double rate = static_cast<double>(step.batch_accepts) /
                    AdaptiveStepState::batch_size;
      step.log_scale +=
          (rate - step.target_accept) / std::sqrt(static_cast<double>(step.batch_count));
    }
    step.batch_accepts = 0;
  }
  return {next, accepted};
}

}  // namespace synthcat
