#include "synthcat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "synthcat/distributions.hpp"
#include "synthcat/errors.hpp"

namespace synthcat {

std::string bounds_scenario_name(BoundsScenario scenario) {
  return scenario == BoundsScenario::min ? "min" : "max";
}

BoundsScenario parse_bounds_scenario(const std::string& text) {
  if (text == "min") return BoundsScenario::min;
  if (text == "max") return BoundsScenario::max;
  throw ConfigError("unknown bounds scenario '" + text + "'");
}

CategoricalDataset resample_max(const CategoricalDataset& original,
                                const PatternIndex& patterns, RngStream& rng) {
  int sens = original.schema.sensitive_index();
  std::size_t G = static_cast<std::size_t>(original.schema.sensitive_levels());

  CategoricalDataset out = original;
  std::vector<double> pmf(G);
  for (std::size_t b = 0; b < patterns.size(); ++b) {
    std::fill(pmf.begin(), pmf.end(), 0.0);
    for (int record : patterns.members[b]) {
      pmf[static_cast<std::size_t>(original.cell(static_cast<std::size_t>(record),
                                                 static_cast<std::size_t>(sens)))] += 1.0;
    }
    for (int record : patterns.members[b]) {
      RngStream record_rng = rng.substream(static_cast<std::uint64_t>(record));
      out.cell(static_cast<std::size_t>(record), static_cast<std::size_t>(sens)) =
          sample_categorical(record_rng, pmf);
    }
  }
  return out;
}

CategoricalDataset resample_min(const CategoricalDataset& original,
                                const PatternIndex& patterns, RngStream& rng,
                                int G) {
  if (G < 2) throw DataError("resample_min: G must be at least 2");
  if (G != original.schema.sensitive_levels()) {
    throw DataError("resample_min: G does not match the schema");
  }
  if (patterns.pattern_of.size() != original.n) {
    throw DataError("resample_min: pattern index does not match the data");
  }
  int sens = original.schema.sensitive_index();
  CategoricalDataset out = original;
  for (std::size_t i = 0; i < original.n; ++i) {
    RngStream record_rng = rng.substream(i);
    out.cell(i, static_cast<std::size_t>(sens)) =
        static_cast<int>(record_rng.next_below(static_cast<std::uint32_t>(G)));
  }
  return out;
}

Histogram make_histogram(const std::vector<double>& values) {
  Histogram hist;
  hist.bin_counts.assign(Histogram::bins, 0);
  std::vector<double> defined;
  defined.reserve(values.size());
  for (double v : values) {
    if (!std::isnan(v)) defined.push_back(v);
  }
  hist.defined = static_cast<long long>(defined.size());
  if (defined.empty()) return hist;
  hist.lo = *std::min_element(defined.begin(), defined.end());
  hist.hi = *std::max_element(defined.begin(), defined.end());
  double width = hist.hi - hist.lo;
  if (width <= 0.0) {
    hist.bin_counts[0] = hist.defined;
    return hist;
  }
  for (double v : defined) {
    int bin = static_cast<int>((v - hist.lo) / width * Histogram::bins);
    bin = std::clamp(bin, 0, Histogram::bins - 1);
    hist.bin_counts[static_cast<std::size_t>(bin)] += 1;
  }
  return hist;
}

namespace {

RiskCaseSummary fold_mean(const std::vector<RiskCaseStats>& rows) {
  RiskCaseSummary out;
  double fmr_sum = 0.0;
  for (const auto& row : rows) {
    out.expected_risk += row.expected_risk;
    out.true_match_rate += row.true_match_rate;
    out.s += static_cast<double>(row.s);
    if (!std::isnan(row.false_match_rate)) {
      fmr_sum += row.false_match_rate;
      out.fmr_defined += 1;
    }
  }
  double n = static_cast<double>(rows.size());
  out.expected_risk /= n;
  out.true_match_rate /= n;
  out.s /= n;
  out.false_match_rate = out.fmr_defined > 0
                             ? fmr_sum / static_cast<double>(out.fmr_defined)
                             : std::numeric_limits<double>::quiet_NaN();
  return out;
}

RiskCaseSummary fold_extreme(const std::vector<RiskCaseStats>& rows, bool want_max) {
  RiskCaseSummary out;
  double sign = want_max ? -1.0 : 1.0;
  out.expected_risk = sign * std::numeric_limits<double>::infinity();
  out.true_match_rate = sign * std::numeric_limits<double>::infinity();
  out.false_match_rate = sign * std::numeric_limits<double>::infinity();
  out.s = sign * std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    auto pick = [want_max](double acc, double v) {
      return want_max ? std::max(acc, v) : std::min(acc, v);
    };
    out.expected_risk = pick(out.expected_risk, row.expected_risk);
    out.true_match_rate = pick(out.true_match_rate, row.true_match_rate);
    out.s = pick(out.s, static_cast<double>(row.s));
    if (!std::isnan(row.false_match_rate)) {
      out.false_match_rate = pick(out.false_match_rate, row.false_match_rate);
      out.fmr_defined += 1;
    }
  }
  if (out.fmr_defined == 0) {
    out.false_match_rate = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace

BoundsReport bounds_run(const CategoricalDataset& original,
                        BoundsScenario scenario, int S,
                        const std::vector<std::vector<int>>& known_cases,
                        RngStream& rng, int jobs) {
  if (S < 1) throw ConfigError("bounds: S must be at least 1");
  if (known_cases.empty()) throw ConfigError("bounds: no known-variable cases");
  if (jobs < 1) jobs = 1;
  original.validate();

  PatternIndex patterns =
      build_pattern_index(original, original.schema.key_indices());
  int sens = original.schema.sensitive_index();
  int G = original.schema.sensitive_levels();

  BoundsReport report;
  report.scenario = scenario;
  report.S = S;
  report.known_cases = known_cases;
  report.iterations.assign(static_cast<std::size_t>(S), BoundsIterationRow{});

  std::uint64_t scenario_block = scenario == BoundsScenario::min ? 0 : 1;
  auto run_iteration = [&](int iter) {
    RngStream iter_rng = rng.substream(
        make_stream_id(stream_domain::bounds, scenario_block,
                       static_cast<std::uint64_t>(iter)));
    CategoricalDataset resampled =
        scenario == BoundsScenario::min
            ? resample_min(original, patterns, iter_rng, G)
            : resample_max(original, patterns, iter_rng);
    BoundsIterationRow row;
    row.iteration = iter + 1;
    for (const auto& known : known_cases) {
      auto stats = match_statistics(original, resampled, known, sens);
      RiskCaseStats cs;
      cs.expected_risk = expected_match_risk(stats);
      cs.true_match_rate = true_match_rate(stats);
      cs.false_match_rate = false_match_rate(stats);
      cs.s = unique_match_count(stats);
      row.cases.push_back(cs);
    }
    row.attribute_count = attribute_disclosures(original, resampled).first;
    report.iterations[static_cast<std::size_t>(iter)] = std::move(row);
  };

  if (jobs == 1 || S == 1) {
    for (int iter = 0; iter < S; ++iter) run_iteration(iter);
  } else {
    // iterations own disjoint substreams and disjoint output slots, so the
    // partition across threads cannot change the result
    int workers = std::min(jobs, S);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int iter = w; iter < S; iter += workers) run_iteration(iter);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t case_idx = 0; case_idx < known_cases.size(); ++case_idx) {
    std::vector<RiskCaseStats> rows;
    std::vector<double> ers, tmrs, fmrs;
    rows.reserve(report.iterations.size());
    for (const auto& row : report.iterations) {
      rows.push_back(row.cases[case_idx]);
      ers.push_back(row.cases[case_idx].expected_risk);
      tmrs.push_back(row.cases[case_idx].true_match_rate);
      fmrs.push_back(row.cases[case_idx].false_match_rate);
    }
    BoundsCaseSummary summary;
    summary.stats_mean = fold_mean(rows);
    summary.stats_min = fold_extreme(rows, false);
    summary.stats_max = fold_extreme(rows, true);
    summary.expected_risk_hist = make_histogram(ers);
    summary.true_match_rate_hist = make_histogram(tmrs);
    summary.false_match_rate_hist = make_histogram(fmrs);
    report.by_case.push_back(std::move(summary));
  }

  std::vector<double> attr;
  report.attribute_min = report.iterations[0].attribute_count;
  report.attribute_max = report.iterations[0].attribute_count;
  for (const auto& row : report.iterations) {
    attr.push_back(static_cast<double>(row.attribute_count));
    report.attribute_mean += static_cast<double>(row.attribute_count);
    report.attribute_min = std::min(report.attribute_min, row.attribute_count);
    report.attribute_max = std::max(report.attribute_max, row.attribute_count);
  }
  report.attribute_mean /= static_cast<double>(S);
  report.attribute_hist = make_histogram(attr);
  return report;
}

}  // namespace synthcat
