#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "support/oracles.hpp"
#include "synthcat/dpmpm.hpp"
#include "synthcat/errors.hpp"
#include "synthcat/rng.hpp"

using namespace synthcat;

namespace {

CategoricalDataset fixed_dataset(int n, RngStream& rng) {
  Schema schema = oracle::make_schema({{"gender", 2}, {"age", 4}}, "county", 3);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < n; ++i) {
    // skewed but fixed generating probabilities so counts are uneven
    int g = rng.next_double() < 0.6 ? 0 : 1;
    int a = static_cast<int>(rng.next_below(4));
    double u = rng.next_double();
    int c = u < 0.5 ? 0 : (u < 0.8 ? 1 : 2);
    rows.push_back({g, a, c});
  }
  return oracle::make_dataset(schema, rows);
}

std::vector<int> sorted_sensitive(const CategoricalDataset& data) {
  std::vector<int> values;
  std::size_t sens = static_cast<std::size_t>(data.schema.sensitive_index());
  for (std::size_t i = 0; i < data.n; ++i) values.push_back(data.cell(i, sens));
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace

TEST_CASE("init with a single class is fully deterministic in z and pi") {
  RngStream rng(200, 1);
  CategoricalDataset data = fixed_dataset(50, rng);
  DpmpmHyper hyper;
  hyper.K = 1;
  DpmpmState state = dpmpm_init(data, hyper, rng);
  CHECK(state.pi == std::vector<double>{1.0});
  CHECK(state.beta == std::vector<double>{1.0});
  for (int z : state.z) CHECK(z == 0);
  CHECK_NOTHROW(check_dpmpm_state(state, data, hyper));
}

TEST_CASE("init satisfies the state invariants on random data") {
  RngStream rng(201, 1);
  CategoricalDataset data = fixed_dataset(120, rng);
  DpmpmHyper hyper;
  hyper.K = 17;
  DpmpmState state = dpmpm_init(data, hyper, rng);
  CHECK_NOTHROW(check_dpmpm_state(state, data, hyper));
}

TEST_CASE("huge prior concentration flattens initial theta") {
  RngStream rng(202, 1);
  CategoricalDataset data = fixed_dataset(30, rng);
  DpmpmHyper hyper;
  hyper.K = 2;
  hyper.dirichlet_a = 1e9;
  DpmpmState state = dpmpm_init(data, hyper, rng);
  for (const auto& theta_k : state.theta) {
    for (std::size_t j = 0; j < theta_k.size(); ++j) {
      double uniform = 1.0 / static_cast<double>(theta_k[j].size());
      for (double v : theta_k[j]) CHECK(std::fabs(v - uniform) < 1e-4);
    }
  }
}

TEST_CASE("single-class sweeps draw theta from the exact conjugate posterior") {
  RngStream data_rng(203, 1);
  CategoricalDataset data = fixed_dataset(500, data_rng);
  DpmpmHyper hyper;
  hyper.K = 1;

  RngStream rng(203, 2);
  DpmpmState state = dpmpm_init(data, hyper, rng);

  // marginal level counts per variable give the analytic posterior
  std::vector<std::vector<long long>> counts(data.p());
  for (std::size_t j = 0; j < data.p(); ++j) {
    counts[j].assign(static_cast<std::size_t>(data.schema.variables[j].levels), 0);
    for (std::size_t i = 0; i < data.n; ++i) {
      counts[j][static_cast<std::size_t>(data.cell(i, j))] += 1;
    }
  }

  const int sweeps = 2000;
  std::vector<std::vector<double>> mean(data.p());
  for (std::size_t j = 0; j < data.p(); ++j) {
    mean[j].assign(counts[j].size(), 0.0);
  }
  for (int s = 0; s < sweeps; ++s) {
    dpmpm_sweep(state, data, hyper, rng);
    CHECK(state.z[0] == 0);  // z cannot move with one class
    for (std::size_t j = 0; j < data.p(); ++j) {
      for (std::size_t l = 0; l < mean[j].size(); ++l) {
        mean[j][l] += state.theta[0][j][l];
      }
    }
  }

  // with K = 1 the theta draws are iid Dirichlet(a + counts), so the MC
  // standard error is just the posterior sd over sqrt(sweeps)
  for (std::size_t j = 0; j < data.p(); ++j) {
    double total = 0.0;
    for (long long c : counts[j]) total += static_cast<double>(c) + hyper.dirichlet_a;
    for (std::size_t l = 0; l < mean[j].size(); ++l) {
      mean[j][l] /= sweeps;
      double post_mean =
          (hyper.dirichlet_a + static_cast<double>(counts[j][l])) / total;
      double post_sd = std::sqrt(post_mean * (1.0 - post_mean) / (total + 1.0));
      CHECK(std::fabs(mean[j][l] - post_mean) < 3.0 * post_sd / std::sqrt(sweeps));
    }
  }
}

TEST_CASE("sweeps keep the invariants and visit both labelings on identical rows") {
  Schema schema = oracle::make_schema({{"gender", 2}}, "county", 2);
  std::vector<std::vector<int>> rows(40, std::vector<int>{0, 1});
  CategoricalDataset data = oracle::make_dataset(schema, rows);

  DpmpmHyper hyper;
  hyper.K = 2;
  RngStream rng(204, 1);
  DpmpmState state = dpmpm_init(data, hyper, rng);
  for (int s = 0; s < 200; ++s) {
    dpmpm_sweep(state, data, hyper, rng);
    CHECK_NOTHROW(check_dpmpm_state(state, data, hyper));
    int occ = occupied_classes(state);
    CHECK(occ >= 1);
    CHECK(occ <= 2);
  }
}

TEST_CASE("occupied_classes counts distinct labels") {
  DpmpmState state;
  state.z = {4, 4, 4, 4};
  CHECK(occupied_classes(state) == 1);
  state.z = {0, 1, 2};
  CHECK(occupied_classes(state) == 3);
}

TEST_CASE("degenerate theta forces every synthetic county") {
  RngStream rng(205, 1);
  CategoricalDataset data = fixed_dataset(60, rng);
  DpmpmHyper hyper;
  hyper.K = 2;
  DpmpmState state = dpmpm_init(data, hyper, rng);
  std::size_t sens = static_cast<std::size_t>(data.schema.sensitive_index());
  for (auto& theta_k : state.theta) {
    theta_k[sens] = {0.0, 0.0, 1.0};
  }

  for (SynthesisMode mode : {SynthesisMode::full_conditional_keys,
                             SynthesisMode::marginal, SynthesisMode::chain_state}) {
    CategoricalDataset synthetic = dpmpm_synthesize(state, data, mode, rng);
    for (std::size_t i = 0; i < data.n; ++i) {
      CHECK(synthetic.cell(i, sens) == 2);
      CHECK(synthetic.cell(i, 0) == data.cell(i, 0));  // keys untouched
      CHECK(synthetic.cell(i, 1) == data.cell(i, 1));
    }
  }
}

TEST_CASE("chain-state synthesis follows the stored assignments") {
  Schema schema = oracle::make_schema({{"gender", 2}}, "county", 2);
  CategoricalDataset data =
      oracle::make_dataset(schema, {{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  DpmpmHyper hyper;
  hyper.K = 2;
  RngStream rng(206, 1);
  DpmpmState state = dpmpm_init(data, hyper, rng);
  state.z = {0, 1, 0, 1};
  state.theta[0][1] = {1.0, 0.0};  // class 0 emits county 1
  state.theta[1][1] = {0.0, 1.0};  // class 1 emits county 2

  CategoricalDataset synthetic =
      dpmpm_synthesize(state, data, SynthesisMode::chain_state, rng);
  CHECK(synthetic.cell(0, 1) == 0);
  CHECK(synthetic.cell(1, 1) == 1);
  CHECK(synthetic.cell(2, 1) == 0);
  CHECK(synthetic.cell(3, 1) == 1);
}

TEST_CASE("single-class synthesis commutes with record permutation") {
  RngStream rng(207, 1);
  CategoricalDataset data = fixed_dataset(80, rng);
  DpmpmHyper hyper;
  hyper.K = 1;
  RngStream chain_rng(207, 2);
  DpmpmState state = dpmpm_init(data, hyper, chain_rng);
  for (int s = 0; s < 20; ++s) dpmpm_sweep(state, data, hyper, chain_rng);

  CategoricalDataset reversed = data;
  for (std::size_t i = 0; i < data.n; ++i) {
    for (std::size_t j = 0; j < data.p(); ++j) {
      reversed.cell(i, j) = data.cell(data.n - 1 - i, j);
    }
  }

  RngStream synth_rng(207, 3);
  CategoricalDataset a =
      dpmpm_synthesize(state, data, SynthesisMode::full_conditional_keys, synth_rng);
  CategoricalDataset b = dpmpm_synthesize(state, reversed,
                                          SynthesisMode::full_conditional_keys,
                                          synth_rng);
  CHECK(sorted_sensitive(a) == sorted_sensitive(b));
}

TEST_CASE("replicate snapshots space evenly through the post-burn-in window") {
  RunCfg cfg;
  cfg.iterations = 10;
  cfg.burn_in = 5;
  cfg.m = 2;
  CHECK(replicate_snapshots(cfg) == std::vector<std::uint64_t>{7, 9});
  cfg.m = 5;
  CHECK(replicate_snapshots(cfg) ==
        std::vector<std::uint64_t>{6, 7, 8, 9, 10});
  cfg.m = 6;
  CHECK_THROWS_AS(replicate_snapshots(cfg), ConfigError);
  cfg.m = 1;
  cfg.iterations = 6;
  CHECK(replicate_snapshots(cfg) == std::vector<std::uint64_t>{6});
  cfg.burn_in = 6;
  CHECK_THROWS_AS(validate_run_cfg(cfg), ConfigError);
}

TEST_CASE("dpmpm_run produces distinct replicates and useful traces") {
  RngStream data_rng(208, 1);
  CategoricalDataset data = fixed_dataset(150, data_rng);
  DpmpmHyper hyper;
  hyper.K = 8;
  RunCfg cfg;
  cfg.iterations = 60;
  cfg.burn_in = 20;
  cfg.m = 3;

  RngStream rng(208, 2);
  ChainDiagnostics diagnostics;
  SyntheticBundle bundle = dpmpm_run(data, hyper, cfg,
                                     SynthesisMode::full_conditional_keys, rng,
                                     &diagnostics);

  REQUIRE(bundle.replicates.size() == 3);
  CHECK(bundle.replicate_streams.size() == 3);
  CHECK(bundle.synthesizer == "dpmpm");

  // all replicates keep keys; at least one pair differs in the county column
  std::size_t sens = static_cast<std::size_t>(data.schema.sensitive_index());
  bool any_difference = false;
  for (const auto& replicate : bundle.replicates) {
    REQUIRE(replicate.n == data.n);
    for (std::size_t i = 0; i < data.n; ++i) {
      CHECK(replicate.cell(i, 0) == data.cell(i, 0));
      CHECK(replicate.cell(i, 1) == data.cell(i, 1));
    }
  }
  for (std::size_t i = 0; i < data.n && !any_difference; ++i) {
    if (bundle.replicates[0].cell(i, sens) != bundle.replicates[1].cell(i, sens)) {
      any_difference = true;
    }
  }
  CHECK(any_difference);

  REQUIRE(diagnostics.columns.size() >= 3);
  CHECK(std::find(diagnostics.columns.begin(), diagnostics.columns.end(),
                  "occupied_classes") != diagnostics.columns.end());
  CHECK(std::find(diagnostics.columns.begin(), diagnostics.columns.end(),
                  "alpha") != diagnostics.columns.end());
  CHECK(diagnostics.rows.size() == cfg.iterations);
}

TEST_CASE("a one-iteration budget yields a single final-state replicate") {
  RngStream data_rng(209, 1);
  CategoricalDataset data = fixed_dataset(40, data_rng);
  DpmpmHyper hyper;
  hyper.K = 3;
  RunCfg cfg;
  cfg.iterations = 11;
  cfg.burn_in = 10;
  cfg.m = 1;
  RngStream rng(209, 2);
  SyntheticBundle bundle = dpmpm_run(data, hyper, cfg, SynthesisMode::marginal,
                                     rng, nullptr);
  CHECK(bundle.replicates.size() == 1);
}

TEST_CASE("run rejects an over-asked replicate budget") {
  RngStream data_rng(210, 1);
  CategoricalDataset data = fixed_dataset(20, data_rng);
  DpmpmHyper hyper;
  hyper.K = 2;
  RunCfg cfg;
  cfg.iterations = 12;
  cfg.burn_in = 10;
  cfg.m = 5;
  RngStream rng(210, 2);
  CHECK_THROWS_AS(
      dpmpm_run(data, hyper, cfg, SynthesisMode::marginal, rng, nullptr),
      ConfigError);
}
