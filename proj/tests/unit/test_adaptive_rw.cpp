#include "doctest.h"

#include <cmath>
#include <limits>

#include "synthcat/adaptive_rw.hpp"
#include "synthcat/errors.hpp"
#include "synthcat/rng.hpp"

using namespace synthcat;

namespace {

double standard_normal_logpdf(double x) { return -0.5 * x * x; }

}  // namespace

TEST_CASE("adapted walker recovers standard normal moments") {
  RngStream rng(101, 1);
  AdaptiveStepState step;
  double x = 3.0;  // deliberately off-center start

  for (int i = 0; i < 20000; ++i) {
    x = adaptive_rw_update(standard_normal_logpdf, x, step, rng).first;
  }
  step.adapting = false;

  double sum = 0.0, sumsq = 0.0;
  long long accepted = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto [next, ok] = adaptive_rw_update(standard_normal_logpdf, x, step, rng);
    x = next;
    if (ok) accepted += 1;
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / draws;
  double var = sumsq / draws - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs(var - 1.0) < 0.05);
  // adaptation aimed at 0.44 before the freeze
  double rate = static_cast<double>(accepted) / draws;
  CHECK(rate > 0.3);
  CHECK(rate < 0.6);
}

TEST_CASE("frozen scale never moves again") {
  RngStream rng(102, 1);
  AdaptiveStepState step;
  double x = 0.0;
  for (int i = 0; i < 5000; ++i) {
    x = adaptive_rw_update(standard_normal_logpdf, x, step, rng).first;
  }
  step.adapting = false;
  double frozen = step.log_scale;
  for (int i = 0; i < 5000; ++i) {
    x = adaptive_rw_update(standard_normal_logpdf, x, step, rng).first;
    CHECK(step.log_scale == frozen);
  }
}

TEST_CASE("scale adapts during the batch schedule") {
  RngStream rng(103, 1);
  AdaptiveStepState step;
  step.log_scale = -8.0;  // absurdly small steps accept nearly always
  double x = 0.0;
  for (int i = 0; i < 2000; ++i) {
    x = adaptive_rw_update(standard_normal_logpdf, x, step, rng).first;
  }
  CHECK(step.log_scale > -8.0);
}

TEST_CASE("walker splits mass evenly over a symmetric bimodal target") {
  auto logdensity = [](double x) {
    double a = -0.5 * (x - 3.0) * (x - 3.0);
    double b = -0.5 * (x + 3.0) * (x + 3.0);
    double hi = a > b ? a : b;
    return hi + std::log(0.5 * std::exp(a - hi) + 0.5 * std::exp(b - hi));
  };
  RngStream rng(104, 1);
  AdaptiveStepState step;
  double x = 0.0;
  for (int i = 0; i < 20000; ++i) {
    x = adaptive_rw_update(logdensity, x, step, rng).first;
  }
  step.adapting = false;
  long long right = 0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    x = adaptive_rw_update(logdensity, x, step, rng).first;
    if (x > 0.0) right += 1;
  }
  double share = static_cast<double>(right) / draws;
  CHECK(std::fabs(share - 0.5) < 0.05);
}

TEST_CASE("NaN at the current point aborts") {
  RngStream rng(105, 1);
  AdaptiveStepState step;
  auto bad = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(adaptive_rw_update(bad, 0.0, step, rng), NumericError);
}

TEST_CASE("NaN at a proposal only rejects it") {
  // density undefined above 1: the walker must stay at or below 1 and never
  // abort, because the current point is always finite
  auto guarded = [](double x) {
    if (x > 1.0) return std::numeric_limits<double>::quiet_NaN();
    return -0.5 * x * x;
  };
  RngStream rng(106, 1);
  AdaptiveStepState step;
  double x = 0.0;
  for (int i = 0; i < 20000; ++i) {
    x = adaptive_rw_update(guarded, x, step, rng).first;
    CHECK(x <= 1.0);
  }
}
