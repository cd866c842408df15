#pragma once

#include <span>
#include <utility>
#include <vector>

#include "synthcat/dataset.hpp"
#include "synthcat/synth_common.hpp"

namespace synthcat {

struct MatchRecord {
  int record = 0;   // 0-based record index
  long long c = 0;  // match-set size
  int T = 0;        // synthetic sensitive equals the true value
  int K_flag = 0;   // c == 1 and T == 1
  int F_flag = 0;   // c == 1 and T == 0
};

// Intruder match sets: c_i counts records j whose original known-key values
// equal record i's and whose synthetic sensitive value equals record i's true
// value. Grouped tallies keep this O(n).
std::vector<MatchRecord> match_statistics(const CategoricalDataset& original,
                                          const CategoricalDataset& synthetic,
                                          const std::vector<int>& known_vars,
                                          int sensitive_var);

// Sum of T_i / c_i; records with c_i = 0 contribute 0.
double expected_match_risk(std::span<const MatchRecord> stats);

// Sum of K_i over n.
double true_match_rate(std::span<const MatchRecord> stats);

// Sum of F_i over s = #{c_i = 1}; NaN when s = 0.
double false_match_rate(std::span<const MatchRecord> stats);

long long unique_match_count(std::span<const MatchRecord> stats);  // s

// Count and proportion of records whose synthetic sensitive value equals the
// true one.
std::pair<long long, double> attribute_disclosures(
    const CategoricalDataset& original, const CategoricalDataset& synthetic);

struct RiskCaseStats {
  double expected_risk = 0.0;
  double true_match_rate = 0.0;
  double false_match_rate = 0.0;  // NaN when s = 0
  long long s = 0;
};

// Replicate aggregate; false_match_rate fields average the replicates where
// it is defined, and fmr_defined says how many those were.
struct RiskCaseSummary {
  double expected_risk = 0.0;
  double true_match_rate = 0.0;
  double false_match_rate = 0.0;
  double s = 0.0;
  int fmr_defined = 0;
};

struct RiskReport {
  std::vector<std::vector<int>> known_cases;               // variable indices
  std::vector<std::vector<RiskCaseStats>> per_case;        // [case][replicate]
  std::vector<RiskCaseSummary> mean_by_case;
  std::vector<RiskCaseSummary> min_by_case;
  std::vector<RiskCaseSummary> max_by_case;
  std::vector<long long> attribute_counts;                 // per replicate
  std::vector<double> attribute_pcts;                      // proportions
  double mean_attribute_count = 0.0;
  double mean_attribute_pct = 0.0;
};

RiskReport risk_report(const CategoricalDataset& original,
                       const SyntheticBundle& bundle,
                       const std::vector<std::vector<int>>& known_cases);

// Default intruder scenarios: nested prefixes of the key variables in schema
// order ({k1}, {k1,k2}, ..., up to three).
std::vector<std::vector<int>> default_known_cases(const Schema& schema);

}  // namespace synthcat
