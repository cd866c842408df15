#include "synthcat/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "synthcat/errors.hpp"

namespace synthcat {

std::vector<MatchRecord> match_statistics(const CategoricalDataset& original,
                                          const CategoricalDataset& synthetic,
                                          const std::vector<int>& known_vars,
                                          int sensitive_var) {
  if (original.n != synthetic.n || original.p() != synthetic.p()) {
    throw DataError("match_statistics: datasets differ in shape");
  }
  if (sensitive_var < 0 || sensitive_var >= static_cast<int>(original.p()) ||
      original.schema.variables[static_cast<std::size_t>(sensitive_var)].role !=
          Role::sensitive) {
    throw DataError("match_statistics: sensitive_var is not the sensitive variable");
  }
  if (known_vars.empty()) throw DataError("match_statistics: empty known_vars");
  for (int v : known_vars) {
    if (v < 0 || v >= static_cast<int>(original.p())) {
      throw DataError("match_statistics: known variable index out of range");
    }
    if (v == sensitive_var) {
      throw DataError("match_statistics: known_vars must not include the sensitive variable");
    }
    if (original.schema.variables[static_cast<std::size_t>(v)].role != Role::key) {
      throw DataError("match_statistics: known variable '" +
                      original.schema.variables[static_cast<std::size_t>(v)].name +
                      "' is not a key");
    }
  }

  // group records by known-key value, then tally synthetic sensitive values
  // per group; c_i is a single lookup afterwards
  std::size_t G = static_cast<std::size_t>(
      original.schema.variables[static_cast<std::size_t>(sensitive_var)].levels);
  std::map<std::vector<int>, int> group_of;
  std::vector<int> group(original.n);
  std::vector<int> key(known_vars.size());
  for (std::size_t i = 0; i < original.n; ++i) {
    for (std::size_t k = 0; k < known_vars.size(); ++k) {
      key[k] = original.cell(i, static_cast<std::size_t>(known_vars[k]));
    }
    auto it = group_of.try_emplace(key, static_cast<int>(group_of.size())).first;
    group[i] = it->second;
  }
  std::vector<std::vector<long long>> tally(group_of.size(),
                                            std::vector<long long>(G, 0));
  for (std::size_t i = 0; i < original.n; ++i) {
    tally[static_cast<std::size_t>(group[i])][static_cast<std::size_t>(
        synthetic.cell(i, static_cast<std::size_t>(sensitive_var)))] += 1;
  }

  std::vector<MatchRecord> stats(original.n);
  for (std::size_t i = 0; i < original.n; ++i) {
    int truth = original.cell(i, static_cast<std::size_t>(sensitive_var));
    MatchRecord& rec = stats[i];
    rec.record = static_cast<int>(i);
    rec.c = tally[static_cast<std::size_t>(group[i])][static_cast<std::size_t>(truth)];
    rec.T = synthetic.cell(i, static_cast<std::size_t>(sensitive_var)) == truth ? 1 : 0;
    rec.K_flag = (rec.c == 1 && rec.T == 1) ? 1 : 0;
    rec.F_flag = (rec.c == 1 && rec.T == 0) ? 1 : 0;
  }
  return stats;
}

double expected_match_risk(std::span<const MatchRecord> stats) {
  double total = 0.0;
  for (const auto& rec : stats) {
    if (rec.T == 1 && rec.c > 0) {
      total += 1.0 / static_cast<double>(rec.c);
    }
  }
  return total;
}

double true_match_rate(std::span<const MatchRecord> stats) {
  if (stats.empty()) return 0.0;
  long long k = 0;
  for (const auto& rec : stats) k += rec.K_flag;
  return static_cast<double>(k) / static_cast<double>(stats.size());
}

long long unique_match_count(std::span<const MatchRecord> stats) {
  long long s = 0;
  for (const auto& rec : stats) {
    if (rec.c == 1) ++s;
  }
  return s;
}

double false_match_rate(std::span<const MatchRecord> stats) {
  long long s = unique_match_count(stats);
  if (s == 0) return std::numeric_limits<double>::quiet_NaN();
  long long f = 0;
  for (const auto& rec : stats) f += rec.F_flag;
  return static_cast<double>(f) / static_cast<double>(s);
}

std::pair<long long, double> attribute_disclosures(
    const CategoricalDataset& original, const CategoricalDataset& synthetic) {
  if (original.n != synthetic.n || original.p() != synthetic.p()) {
    throw DataError("attribute_disclosures: datasets differ in shape");
  }
  std::size_t sens = static_cast<std::size_t>(original.schema.sensitive_index());
  long long count = 0;
  for (std::size_t i = 0; i < original.n; ++i) {
    if (original.cell(i, sens) == synthetic.cell(i, sens)) ++count;
  }
  return {count, static_cast<double>(count) / static_cast<double>(original.n)};
}

std::vector<std::vector<int>> default_known_cases(const Schema& schema) {
  auto keys = schema.key_indices();
  std::size_t depth = std::min<std::size_t>(keys.size(), 3);
  std::vector<std::vector<int>> cases;
  for (std::size_t d = 1; d <= depth; ++d) {
    cases.emplace_back(keys.begin(), keys.begin() + static_cast<long>(d));
  }
  return cases;
}

namespace {

RiskCaseStats case_stats(std::span<const MatchRecord> stats) {
  RiskCaseStats out;
  out.expected_risk = expected_match_risk(stats);
  out.true_match_rate = true_match_rate(stats);
  out.false_match_rate = false_match_rate(stats);
  out.s = unique_match_count(stats);
  return out;
}

}  // namespace

RiskReport risk_report(const CategoricalDataset& original,
                       const SyntheticBundle& bundle,
                       const std::vector<std::vector<int>>& known_cases) {
  if (bundle.replicates.empty()) throw DataError("risk report: empty bundle");
  if (known_cases.empty()) throw DataError("risk report: no known-variable cases");
  int sens = original.schema.sensitive_index();

  RiskReport report;
  report.known_cases = known_cases;
  report.per_case.resize(known_cases.size());

  for (std::size_t case_idx = 0; case_idx < known_cases.size(); ++case_idx) {
    auto& rows = report.per_case[case_idx];
    for (const auto& synthetic : bundle.replicates) {
      auto stats = match_statistics(original, synthetic, known_cases[case_idx], sens);
      rows.push_back(case_stats(stats));
    }

    RiskCaseSummary mean, lo, hi;
    lo.expected_risk = std::numeric_limits<double>::infinity();
    lo.true_match_rate = std::numeric_limits<double>::infinity();
    lo.false_match_rate = std::numeric_limits<double>::infinity();
    lo.s = std::numeric_limits<double>::infinity();
    hi.expected_risk = -std::numeric_limits<double>::infinity();
    hi.true_match_rate = -std::numeric_limits<double>::infinity();
    hi.false_match_rate = -std::numeric_limits<double>::infinity();
    hi.s = -std::numeric_limits<double>::infinity();
    double fmr_sum = 0.0;
    for (const auto& row : rows) {
      mean.expected_risk += row.expected_risk;
      mean.true_match_rate += row.true_match_rate;
      mean.s += static_cast<double>(row.s);
      lo.expected_risk = std::min(lo.expected_risk, row.expected_risk);
      hi.expected_risk = std::max(hi.expected_risk, row.expected_risk);
      lo.true_match_rate = std::min(lo.true_match_rate, row.true_match_rate);
      hi.true_match_rate = std::max(hi.true_match_rate, row.true_match_rate);
      lo.s = std::min(lo.s, static_cast<double>(row.s));
      hi.s = std::max(hi.s, static_cast<double>(row.s));
      if (!std::isnan(row.false_match_rate)) {
        fmr_sum += row.false_match_rate;
        mean.fmr_defined += 1;
        lo.false_match_rate = std::min(lo.false_match_rate, row.false_match_rate);
        hi.false_match_rate = std::max(hi.false_match_rate, row.false_match_rate);
      }
    }
    double m = static_cast<double>(rows.size());
    mean.expected_risk /= m;
    mean.true_match_rate /= m;
    mean.s /= m;
    lo.fmr_defined = hi.fmr_defined = mean.fmr_defined;
    if (mean.fmr_defined > 0) {
      mean.false_match_rate = fmr_sum / static_cast<double>(mean.fmr_defined);
    } else {
      mean.false_match_rate = std::numeric_limits<double>::quiet_NaN();
      lo.false_match_rate = std::numeric_limits<double>::quiet_NaN();
      hi.false_match_rate = std::numeric_limits<double>::quiet_NaN();
    }
    report.mean_by_case.push_back(mean);
    report.min_by_case.push_back(lo);
    report.max_by_case.push_back(hi);
  }

  for (const auto& synthetic : bundle.replicates) {
    auto [count, pct] = attribute_disclosures(original, synthetic);
    report.attribute_counts.push_back(count);
    report.attribute_pcts.push_back(pct);
    report.mean_attribute_count += static_cast<double>(count);
    report.mean_attribute_pct += pct;
  }
  double m = static_cast<double>(bundle.replicates.size());
  report.mean_attribute_count /= m;
  report.mean_attribute_pct /= m;
  return report;
}

}  // namespace synthcat
