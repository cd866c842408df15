#pragma once

#include <string>
#include <vector>

#include "synthcat/dataset.hpp"
#include "synthcat/pattern.hpp"
#include "synthcat/risk.hpp"
#include "synthcat/rng.hpp"

namespace synthcat {

enum class BoundsScenario { min, max };

std::string bounds_scenario_name(BoundsScenario scenario);
BoundsScenario parse_bounds_scenario(const std::string& text);

// Max scenario: each record redraws its sensitive value from the empirical
// pmf of its pattern (the record itself included). Keys unchanged.
CategoricalDataset resample_max(const CategoricalDataset& original,
                                const PatternIndex& patterns, RngStream& rng);

// Min scenario: each record redraws uniformly over all G levels.
CategoricalDataset resample_min(const CategoricalDataset& original,
                                const PatternIndex& patterns, RngStream& rng,
                                int G);

struct BoundsIterationRow {
  int iteration = 0;                  // 1-based
  std::vector<RiskCaseStats> cases;   // one per known case
  long long attribute_count = 0;
};

// 20 equal-width bins over [lo, hi]; a zero-width range puts everything in
// bin 0. Built only from defined (non-NaN) values; `defined` records how many.
struct Histogram {
  double lo = 0.0, hi = 0.0;
  std::vector<long long> bin_counts;
  long long defined = 0;

  static constexpr int bins = 20;
};

Histogram make_histogram(const std::vector<double>& values);

struct BoundsCaseSummary {
  RiskCaseSummary stats_mean;  // fmr over defined iterations
  RiskCaseSummary stats_min;
  RiskCaseSummary stats_max;
  Histogram expected_risk_hist;
  Histogram true_match_rate_hist;
  Histogram false_match_rate_hist;
};

struct BoundsReport {
  BoundsScenario scenario = BoundsScenario::min;
  int S = 0;
  std::vector<std::vector<int>> known_cases;
  std::vector<BoundsIterationRow> iterations;
  std::vector<BoundsCaseSummary> by_case;
  double attribute_mean = 0.0;
  long long attribute_min = 0, attribute_max = 0;
  Histogram attribute_hist;
};

// S independent resamples, the full risk suite per iteration, and summary
// statistics. In the reported maximum scenario the false match rate reads as
// a lower bound of the acceptable range, not an upper one.
BoundsReport bounds_run(const CategoricalDataset& original,
                        BoundsScenario scenario, int S,
                        const std::vector<std::vector<int>>& known_cases,
                        RngStream& rng, int jobs = 1);

}  // namespace synthcat
