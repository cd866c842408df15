#include "synthcat/dpmpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "synthcat/distributions.hpp"
#include "synthcat/errors.hpp"

namespace synthcat {

std::string synthesis_mode_name(SynthesisMode mode) {
  switch (mode) {
    case SynthesisMode::full_conditional_keys: return "full-conditional-keys";
    case SynthesisMode::marginal: return "marginal";
    case SynthesisMode::chain_state: return "chain-state";
  }
  return "full-conditional-keys";
}

SynthesisMode parse_synthesis_mode(const std::string& text) {
  if (text == "full-conditional-keys") return SynthesisMode::full_conditional_keys;
  if (text == "marginal") return SynthesisMode::marginal;
  if (text == "chain-state") return SynthesisMode::chain_state;
  throw ConfigError("unknown synthesis mode '" + text + "'");
}

namespace {

void validate_hyper(const DpmpmHyper& hyper) {
  if (hyper.K < 1) throw ConfigError("dpmpm: K must be at least 1");
  if (!(hyper.a_alpha > 0.0) || !(hyper.b_alpha > 0.0)) {
    throw ConfigError("dpmpm: a_alpha and b_alpha must be positive");
  }
  if (!(hyper.dirichlet_a > 0.0)) {
    throw ConfigError("dpmpm: dirichlet_a must be positive");
  }
}

std::vector<double> draw_sticks(int K, double alpha, RngStream& rng) {
  std::vector<double> beta(static_cast<std::size_t>(K));
  for (int k = 0; k + 1 < K; ++k) {
    beta[static_cast<std::size_t>(k)] = sample_beta(rng, 1.0, alpha);
  }
  beta[static_cast<std::size_t>(K - 1)] = 1.0;
  return beta;
}

}  // namespace

DpmpmState dpmpm_init(const CategoricalDataset& data, const DpmpmHyper& hyper,
                      RngStream& rng) {
  validate_hyper(hyper);
  data.validate();
  int K = hyper.K;
  std::size_t p = data.p();

  DpmpmState state;
  state.alpha = sample_gamma(rng, hyper.a_alpha, hyper.b_alpha);
  state.beta = draw_sticks(K, state.alpha, rng);
  state.pi = stick_breaking(state.beta);

  state.theta.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    state.theta[static_cast<std::size_t>(k)].resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<double> a(
          static_cast<std::size_t>(data.schema.variables[j].levels),
          hyper.dirichlet_a);
      state.theta[static_cast<std::size_t>(k)][j] = sample_dirichlet(rng, a);
    }
  }

  state.z.resize(data.n);
  for (std::size_t i = 0; i < data.n; ++i) {
    state.z[i] = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(K)));
  }
  return state;
}

void dpmpm_sweep(DpmpmState& state, const CategoricalDataset& data,
                 const DpmpmHyper& hyper, RngStream& rng) {
  int K = hyper.K;
  std::size_t p = data.p();

  // (a) latent classes: weight_k proportional to pi_k * prod_j theta[k][j][x_ij]
  std::vector<double> log_pi(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    double v = state.pi[static_cast<std::size_t>(k)];
    log_pi[static_cast<std::size_t>(k)] =
        v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
  }
  std::vector<double> logw(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < data.n; ++i) {
    for (int k = 0; k < K; ++k) {
      double lw = log_pi[static_cast<std::size_t>(k)];
      const auto& theta_k = state.theta[static_cast<std::size_t>(k)];
      for (std::size_t j = 0; j < p; ++j) {
        lw += std::log(theta_k[j][static_cast<std::size_t>(data.cell(i, j))]);
      }
      logw[static_cast<std::size_t>(k)] = lw;
    }
    state.z[i] = sample_categorical_log(rng, logw);
  }

  // class occupancy
  std::vector<long long> n_k(static_cast<std::size_t>(K), 0);
  for (std::size_t i = 0; i < data.n; ++i) {
    n_k[static_cast<std::size_t>(state.z[i])] += 1;
  }

  // (b) stick fractions: beta_k ~ Beta(1 + n_k, alpha + sum_{l>k} n_l)
  std::vector<long long> tail(static_cast<std::size_t>(K) + 1, 0);
  for (int k = K - 1; k >= 0; --k) {
    tail[static_cast<std::size_t>(k)] =
        tail[static_cast<std::size_t>(k) + 1] + n_k[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k + 1 < K; ++k) {
    double a = 1.0 + static_cast<double>(n_k[static_cast<std::size_t>(k)]);
    double b = state.alpha + static_cast<double>(tail[static_cast<std::size_t>(k) + 1]);
    state.beta[static_cast<std::size_t>(k)] = sample_beta(rng, a, b);
  }
  state.beta[static_cast<std::size_t>(K - 1)] = 1.0;
  state.pi = stick_breaking(state.beta);

  // (c) concentration: alpha ~ Gamma(a + K - 1, b - sum_{k<K} log(1 - beta_k))
  double log_tail = 0.0;
  for (int k = 0; k + 1 < K; ++k) {
    double bk = std::min(state.beta[static_cast<std::size_t>(k)], 1.0 - 1e-12);
    log_tail += std::log(1.0 - bk);
  }
  if (K > 1) {
    state.alpha = sample_gamma(rng, hyper.a_alpha + static_cast<double>(K - 1),
                               hyper.b_alpha - log_tail);
  } else {
    state.alpha = sample_gamma(rng, hyper.a_alpha, hyper.b_alpha);
  }

  // (d) class-level multinomials from their conjugate Dirichlet updates
  std::vector<std::vector<std::vector<double>>> counts(
      static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    counts[static_cast<std::size_t>(k)].resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      counts[static_cast<std::size_t>(k)][j].assign(
          static_cast<std::size_t>(data.schema.variables[j].levels),
          hyper.dirichlet_a);
    }
  }
  for (std::size_t i = 0; i < data.n; ++i) {
    auto& row = counts[static_cast<std::size_t>(state.z[i])];
    for (std::size_t j = 0; j < p; ++j) {
      row[j][static_cast<std::size_t>(data.cell(i, j))] += 1.0;
    }
  }
  for (int k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < p; ++j) {
      state.theta[static_cast<std::size_t>(k)][j] =
          sample_dirichlet(rng, counts[static_cast<std::size_t>(k)][j]);
    }
  }

  state.iteration += 1;
}

int occupied_classes(const DpmpmState& state) {
  std::set<int> seen(state.z.begin(), state.z.end());
  return static_cast<int>(seen.size());
}

CategoricalDataset dpmpm_synthesize(const DpmpmState& state,
                                    const CategoricalDataset& data,
                                    SynthesisMode mode, RngStream& rng) {
  int K = static_cast<int>(state.pi.size());
  int sens = data.schema.sensitive_index();
  auto keys = data.schema.key_indices();

  CategoricalDataset out = data;
  std::vector<double> logw(static_cast<std::size_t>(K));
  std::vector<double> log_pi(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    double v = state.pi[static_cast<std::size_t>(k)];
    log_pi[static_cast<std::size_t>(k)] =
        v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
  }

  for (std::size_t i = 0; i < data.n; ++i) {
    RngStream record_rng = rng.substream(i);
    int zstar = 0;
    switch (mode) {
      case SynthesisMode::full_conditional_keys: {
        for (int k = 0; k < K; ++k) {
          double lw = log_pi[static_cast<std::size_t>(k)];
          const auto& theta_k = state.theta[static_cast<std::size_t>(k)];
          for (int j : keys) {
            lw += std::log(
                theta_k[static_cast<std::size_t>(j)]
                       [static_cast<std::size_t>(data.cell(i, static_cast<std::size_t>(j)))]);
          }
          logw[static_cast<std::size_t>(k)] = lw;
        }
        zstar = sample_categorical_log(record_rng, logw);
        break;
      }
      case SynthesisMode::marginal:
        zstar = sample_categorical(record_rng, state.pi);
        break;
      case SynthesisMode::chain_state:
        zstar = state.z[i];
        break;
    }
    const auto& pmf =
        state.theta[static_cast<std::size_t>(zstar)][static_cast<std::size_t>(sens)];
    out.cell(i, static_cast<std::size_t>(sens)) =
        sample_categorical(record_rng, pmf);
  }
  return out;
}

SyntheticBundle dpmpm_run(const CategoricalDataset& data, const DpmpmHyper& hyper,
                          const RunCfg& cfg, SynthesisMode mode, RngStream& rng,
                          ChainDiagnostics* diagnostics) {
  auto snapshots = replicate_snapshots(cfg);

  DpmpmState state = dpmpm_init(data, hyper, rng);
  if (diagnostics != nullptr) {
    diagnostics->columns = {"iteration", "occupied_classes", "alpha"};
    diagnostics->rows.clear();
  }

  SyntheticBundle bundle;
  bundle.synthesizer = "dpmpm";
  std::size_t next_snapshot = 0;
  for (std::uint64_t it = 1; it <= cfg.iterations; ++it) {
    dpmpm_sweep(state, data, hyper, rng);
    if (diagnostics != nullptr) {
      diagnostics->rows.push_back({static_cast<double>(it),
                                   static_cast<double>(occupied_classes(state)),
                                   state.alpha});
    }
    while (next_snapshot < snapshots.size() && snapshots[next_snapshot] == it) {
      std::uint64_t stream_id = make_stream_id(
          stream_domain::synthesis, static_cast<std::uint64_t>(next_snapshot), 0);
      RngStream synth_rng = rng.substream(stream_id);
      bundle.replicates.push_back(dpmpm_synthesize(state, data, mode, synth_rng));
      bundle.replicate_streams.push_back(stream_id);
      ++next_snapshot;
    }
  }
  return bundle;
}

void check_dpmpm_state(const DpmpmState& state, const CategoricalDataset& data,
                       const DpmpmHyper& hyper) {
  int K = hyper.K;
  if (static_cast<int>(state.beta.size()) != K ||
      static_cast<int>(state.pi.size()) != K) {
    throw NumericError("dpmpm state: beta/pi length mismatch");
  }
  if (state.beta[static_cast<std::size_t>(K - 1)] != 1.0) {
    throw NumericError("dpmpm state: beta[K-1] must be 1");
  }
  auto pi = stick_breaking(state.beta);
  for (int k = 0; k < K; ++k) {
    if (std::abs(pi[static_cast<std::size_t>(k)] -
                 state.pi[static_cast<std::size_t>(k)]) > 1e-12) {
      throw NumericError("dpmpm state: pi is not stick_breaking(beta)");
    }
  }
  if (!(state.alpha > 0.0)) throw NumericError("dpmpm state: alpha must be positive");
  if (state.z.size() != data.n) throw NumericError("dpmpm state: z length mismatch");
  for (int zi : state.z) {
    if (zi < 0 || zi >= K) throw NumericError("dpmpm state: z out of range");
  }
  for (int k = 0; k < K; ++k) {
    const auto& theta_k = state.theta[static_cast<std::size_t>(k)];
    if (theta_k.size() != data.p()) {
      throw NumericError("dpmpm state: theta variable count mismatch");
    }
    for (std::size_t j = 0; j < data.p(); ++j) {
      double sum = 0.0;
      for (double v : theta_k[j]) {
        if (!(v >= 0.0)) throw NumericError("dpmpm state: negative theta entry");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw NumericError("dpmpm state: theta simplex violated");
      }
    }
  }
}

}  // namespace synthcat
