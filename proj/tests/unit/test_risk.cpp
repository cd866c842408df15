#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "synthcat/errors.hpp"
#include "synthcat/risk.hpp"
#include "synthcat/rng.hpp"

using namespace synthcat;

namespace {

// the four-record worked example: keys (A,A,B,B), true counties (1,2,1,1),
// synthetic counties (1,1,2,1)
struct HandCase {
  CategoricalDataset original;
  CategoricalDataset synthetic;
};

HandCase hand_case() {
  Schema schema = oracle::make_schema({{"region", 2}}, "county", 2);
  HandCase out{
      oracle::make_dataset(schema, {{0, 0}, {0, 1}, {1, 0}, {1, 0}}),
      oracle::make_dataset(schema, {{0, 0}, {0, 0}, {1, 1}, {1, 0}}),
  };
  return out;
}

CategoricalDataset random_original(RngStream& rng, int n) {
  Schema schema = oracle::make_schema({{"gender", 2}, {"age", 3}}, "county", 4);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < n; ++i) {
    rows.push_back({static_cast<int>(rng.next_below(2)),
                    static_cast<int>(rng.next_below(3)),
                    static_cast<int>(rng.next_below(4))});
  }
  return oracle::make_dataset(schema, rows);
}

CategoricalDataset redraw_sensitive(const CategoricalDataset& base, RngStream& rng) {
  CategoricalDataset out = base;
  std::size_t sens = static_cast<std::size_t>(base.schema.sensitive_index());
  int G = base.schema.sensitive_levels();
  for (std::size_t i = 0; i < out.n; ++i) {
    out.cell(i, sens) = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(G)));
  }
  return out;
}

}  // namespace

TEST_CASE("the worked example comes out exactly as the definition dictates") {
  HandCase h = hand_case();
  auto stats = match_statistics(h.original, h.synthetic, {0}, 1);
  REQUIRE(stats.size() == 4);

  // record 1 targets county 1 in key group A: synthetic counties there are
  // (1,1), so c = 2; record 2 targets county 2 there, absent, c = 0; records
  // 3 and 4 target county 1 in group B whose synthetic counties are (2,1)
  CHECK(stats[0].c == 2);
  CHECK(stats[1].c == 0);
  CHECK(stats[2].c == 1);
  CHECK(stats[3].c == 1);
  CHECK(stats[0].T == 1);
  CHECK(stats[1].T == 0);
  CHECK(stats[2].T == 0);
  CHECK(stats[3].T == 1);
  CHECK(stats[0].K_flag == 0);
  CHECK(stats[3].K_flag == 1);
  CHECK(stats[2].F_flag == 1);

  CHECK(expected_match_risk(stats) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(true_match_rate(stats) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(unique_match_count(stats) == 2);
  CHECK(false_match_rate(stats) == doctest::Approx(0.5).epsilon(1e-15));

  auto [count, pct] = attribute_disclosures(h.original, h.synthetic);
  CHECK(count == 2);
  CHECK(pct == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("perfect copy with unique rows is the worst case") {
  Schema schema = oracle::make_schema({{"gender", 2}, {"age", 3}}, "county", 4);
  std::vector<std::vector<int>> rows;
  for (int g = 0; g < 2; ++g) {
    for (int a = 0; a < 3; ++a) rows.push_back({g, a, (g + a) % 4});
  }
  CategoricalDataset data = oracle::make_dataset(schema, rows);
  auto stats = match_statistics(data, data, {0, 1}, 2);
  for (const auto& rec : stats) {
    CHECK(rec.c == 1);
    CHECK(rec.T == 1);
    CHECK(rec.K_flag == 1);
    CHECK(rec.F_flag == 0);
  }
  CHECK(expected_match_risk(stats) == static_cast<double>(data.n));
  CHECK(true_match_rate(stats) == 1.0);
  CHECK(false_match_rate(stats) == 0.0);
  auto [count, pct] = attribute_disclosures(data, data);
  CHECK(count == static_cast<long long>(data.n));
  CHECK(pct == 1.0);
}

TEST_CASE("a synthetic column disjoint from the truth zeroes every summary") {
  Schema schema = oracle::make_schema({{"gender", 2}}, "county", 3);
  CategoricalDataset original =
      oracle::make_dataset(schema, {{0, 0}, {1, 0}, {0, 1}});
  CategoricalDataset synthetic =
      oracle::make_dataset(schema, {{0, 2}, {1, 2}, {0, 2}});
  auto stats = match_statistics(original, synthetic, {0}, 1);
  for (const auto& rec : stats) CHECK(rec.T == 0);
  CHECK(expected_match_risk(stats) == 0.0);
  CHECK(attribute_disclosures(original, synthetic).first == 0);
}

TEST_CASE("false match rate is undefined exactly when no match set is a singleton") {
  Schema schema = oracle::make_schema({{"gender", 2}}, "county", 2);
  // both records in one key group share the true county and the synthetic
  // column carries it twice: c = 2 for both, so s = 0
  CategoricalDataset original = oracle::make_dataset(schema, {{0, 0}, {0, 0}});
  CategoricalDataset synthetic = oracle::make_dataset(schema, {{0, 0}, {0, 0}});
  auto stats = match_statistics(original, synthetic, {0}, 1);
  CHECK(stats[0].c == 2);
  CHECK(unique_match_count(stats) == 0);
  CHECK(std::isnan(false_match_rate(stats)));
}

TEST_CASE("match statistics agree with the brute-force enumerator") {
  RngStream rng(500, 1);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 4 + static_cast<int>(rng.next_below(16));
    CategoricalDataset original = random_original(rng, n);
    CategoricalDataset synthetic = redraw_sensitive(original, rng);
    std::vector<int> known = trial % 2 == 0 ? std::vector<int>{0}
                                            : std::vector<int>{0, 1};

    auto fast = match_statistics(original, synthetic, known, 2);
    auto brute = oracle::brute_match(original, synthetic, known, 2);
    REQUIRE(fast.size() == brute.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(fast[i].c == brute[i].c);
      CHECK(fast[i].T == brute[i].T);
      CHECK(fast[i].K_flag == brute[i].K);
      CHECK(fast[i].F_flag == brute[i].F);
    }
    CHECK(expected_match_risk(fast) == oracle::brute_expected_risk(brute));

    // exact-rational cross-check of the floating accumulation
    oracle::Frac exact = oracle::brute_expected_risk_exact(brute);
    CHECK(std::fabs(expected_match_risk(fast) - exact.value()) < 1e-12);
  }
}

TEST_CASE("refining the known keys never grows a match set") {
  RngStream rng(501, 1);
  for (int trial = 0; trial < 50; ++trial) {
    CategoricalDataset original = random_original(rng, 12);
    CategoricalDataset synthetic = redraw_sensitive(original, rng);
    auto coarse = match_statistics(original, synthetic, {0}, 2);
    auto fine = match_statistics(original, synthetic, {0, 1}, 2);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      CHECK(fine[i].c <= coarse[i].c);
    }
  }
}

TEST_CASE("expected risk dominates the count of true unique matches") {
  RngStream rng(502, 1);
  for (int trial = 0; trial < 30; ++trial) {
    CategoricalDataset original = random_original(rng, 25);
    CategoricalDataset synthetic = redraw_sensitive(original, rng);
    auto stats = match_statistics(original, synthetic, {0, 1}, 2);
    long long true_uniques = 0;
    for (const auto& rec : stats) true_uniques += rec.K_flag;
    CHECK(expected_match_risk(stats) >= static_cast<double>(true_uniques));
  }
}

TEST_CASE("match statistics refuse the sensitive variable as a key") {
  HandCase h = hand_case();
  CHECK_THROWS_AS(match_statistics(h.original, h.synthetic, {0, 1}, 1), DataError);
}

TEST_CASE("default known cases are the nested key prefixes, capped at three") {
  Schema survey = oracle::make_schema({{"gender", 2}, {"age", 4}, {"income", 5}},
                                      "county", 6);
  auto cases = default_known_cases(survey);
  REQUIRE(cases.size() == 3);
  CHECK(cases[0] == std::vector<int>{0});
  CHECK(cases[1] == std::vector<int>{0, 1});
  CHECK(cases[2] == std::vector<int>{0, 1, 2});

  Schema two_keys = oracle::make_schema({{"gender", 2}, {"age", 4}}, "county", 6);
  CHECK(default_known_cases(two_keys).size() == 2);

  Schema five_keys = oracle::make_schema(
      {{"a", 2}, {"b", 2}, {"c", 2}, {"d", 2}, {"e", 2}}, "county", 3);
  CHECK(default_known_cases(five_keys).size() == 3);
}

TEST_CASE("risk report aggregates replicates case by case") {
  RngStream rng(503, 1);
  CategoricalDataset original = random_original(rng, 40);
  SyntheticBundle bundle;
  for (int t = 0; t < 4; ++t) {
    bundle.replicates.push_back(redraw_sensitive(original, rng));
  }
  auto cases = default_known_cases(original.schema);

  RiskReport report = risk_report(original, bundle, cases);
  REQUIRE(report.per_case.size() == cases.size());
  REQUIRE(report.attribute_counts.size() == 4);

  for (std::size_t c = 0; c < cases.size(); ++c) {
    REQUIRE(report.per_case[c].size() == 4);
    double er_sum = 0.0, er_min = 1e300, er_max = -1e300;
    for (int t = 0; t < 4; ++t) {
      // recompute the replicate from first principles
      auto stats =
          match_statistics(original, bundle.replicates[static_cast<std::size_t>(t)],
                           cases[c], original.schema.sensitive_index());
      const RiskCaseStats& row = report.per_case[c][static_cast<std::size_t>(t)];
      CHECK(row.expected_risk == expected_match_risk(stats));
      CHECK(row.true_match_rate == true_match_rate(stats));
      CHECK(row.s == unique_match_count(stats));
      er_sum += row.expected_risk;
      er_min = std::min(er_min, row.expected_risk);
      er_max = std::max(er_max, row.expected_risk);
    }
    CHECK(report.mean_by_case[c].expected_risk ==
          doctest::Approx(er_sum / 4.0).epsilon(1e-15));
    CHECK(report.min_by_case[c].expected_risk == er_min);
    CHECK(report.max_by_case[c].expected_risk == er_max);
  }

  double attr_sum = 0.0;
  for (int t = 0; t < 4; ++t) {
    auto [count, pct] =
        attribute_disclosures(original, bundle.replicates[static_cast<std::size_t>(t)]);
    CHECK(report.attribute_counts[static_cast<std::size_t>(t)] == count);
    CHECK(report.attribute_pcts[static_cast<std::size_t>(t)] == pct);
    attr_sum += static_cast<double>(count);
  }
  CHECK(report.mean_attribute_count == doctest::Approx(attr_sum / 4.0).epsilon(1e-15));
}

TEST_CASE("identical replicates collapse the per-case spread") {
  RngStream rng(504, 1);
  CategoricalDataset original = random_original(rng, 30);
  CategoricalDataset synthetic = redraw_sensitive(original, rng);
  SyntheticBundle bundle;
  bundle.replicates = {synthetic, synthetic, synthetic};

  RiskReport report = risk_report(original, bundle, {{0}});
  const auto& rows = report.per_case[0];
  CHECK(rows[0].expected_risk == rows[1].expected_risk);
  CHECK(rows[1].expected_risk == rows[2].expected_risk);
  CHECK(report.min_by_case[0].expected_risk == report.max_by_case[0].expected_risk);
  CHECK(report.mean_by_case[0].expected_risk == rows[0].expected_risk);
}

TEST_CASE("undefined false match rates stay out of the averages") {
  Schema schema = oracle::make_schema({{"gender", 2}}, "county", 2);
  CategoricalDataset original = oracle::make_dataset(schema, {{0, 0}, {0, 0}});
  // replicate 1: both synthetic counties hit -> c = 2, s = 0, undefined
  CategoricalDataset rep1 = oracle::make_dataset(schema, {{0, 0}, {0, 0}});
  // replicate 2: one hit -> both records have c = 1; one true, one false
  CategoricalDataset rep2 = oracle::make_dataset(schema, {{0, 0}, {0, 1}});
  SyntheticBundle bundle;
  bundle.replicates = {rep1, rep2};

  RiskReport report = risk_report(original, bundle, {{0}});
  CHECK(std::isnan(report.per_case[0][0].false_match_rate));
  // replicate 2: s = 2, one false unique match
  CHECK(report.per_case[0][1].false_match_rate == 0.5);
  CHECK(report.mean_by_case[0].fmr_defined == 1);
  CHECK(report.mean_by_case[0].false_match_rate == 0.5);

  // all-undefined case: the mean itself is marked undefined
  SyntheticBundle undefined_bundle;
  undefined_bundle.replicates = {rep1, rep1};
  RiskReport undefined_report = risk_report(original, undefined_bundle, {{0}});
  CHECK(undefined_report.mean_by_case[0].fmr_defined == 0);
  CHECK(std::isnan(undefined_report.mean_by_case[0].false_match_rate));
}

TEST_CASE("empty bundles are rejected") {
  RngStream rng(505, 1);
  CategoricalDataset original = random_original(rng, 5);
  SyntheticBundle empty;
  CHECK_THROWS_AS(risk_report(original, empty, {{0}}), DataError);
}
