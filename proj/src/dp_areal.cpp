#include "synthcat/dp_areal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "synthcat/distributions.hpp"
#include "synthcat/errors.hpp"
#include "synthcat/tabulate.hpp"

namespace synthcat {

std::string covariance_mode_name(CovarianceMode mode) {
  return mode == CovarianceMode::diagonal ? "diagonal" : "full-lkj";
}

CovarianceMode parse_covariance_mode(const std::string& text) {
  if (text == "diagonal") return CovarianceMode::diagonal;
  if (text == "full-lkj") return CovarianceMode::full_lkj;
  throw ConfigError("unknown covariance mode '" + text + "'");
}

namespace {

void validate_hyper(const DpArealHyper& hyper) {
  if (hyper.K < 1) throw ConfigError("dp-areal: K must be at least 1");
  if (!(hyper.a_alpha > 0.0) || !(hyper.b_alpha > 0.0) ||
      !(hyper.tau_theta_shape > 0.0) || !(hyper.tau_theta_rate > 0.0) ||
      !(hyper.tau_mu_shape > 0.0) || !(hyper.tau_mu_rate > 0.0) ||
      !(hyper.tau_lambda_shape > 0.0) || !(hyper.tau_lambda_rate > 0.0) ||
      !(hyper.sigma_phi_nu > 0.0) || !(hyper.sigma_phi_scale > 0.0)) {
    throw ConfigError("dp-areal: all prior parameters must be positive");
  }
}

// Positions of the ones in a binary design row.
std::vector<std::vector<int>> one_positions(
    const std::vector<std::vector<double>>& design) {
  std::vector<std::vector<int>> ones(design.size());
  for (std::size_t b = 0; b < design.size(); ++b) {
    for (std::size_t r = 0; r < design[b].size(); ++r) {
      if (design[b][r] != 0.0) ones[b].push_back(static_cast<int>(r));
    }
  }
  return ones;
}

}  // namespace

std::vector<std::vector<double>> build_design_matrix(
    const Schema& schema, const PatternIndex& patterns) {
  std::size_t R = 0;
  std::vector<std::size_t> offsets;
  for (int v : patterns.key_vars) {
    offsets.push_back(R);
    R += static_cast<std::size_t>(schema.variables[static_cast<std::size_t>(v)].levels);
  }
  std::vector<std::vector<double>> design(patterns.size(),
                                          std::vector<double>(R, 0.0));
  for (std::size_t b = 0; b < patterns.size(); ++b) {
    for (std::size_t k = 0; k < patterns.key_vars.size(); ++k) {
      design[b][offsets[k] + static_cast<std::size_t>(patterns.pattern_keys[b][k])] = 1.0;
    }
  }
  return design;
}

DpArealState dp_areal_init(const std::vector<std::vector<long long>>& counts,
                           const std::vector<std::vector<double>>& design,
                           const DpArealHyper& hyper, RngStream& rng) {
  validate_hyper(hyper);
  if (hyper.covariance == CovarianceMode::full_lkj) {
    throw ConfigError("dp-areal: covariance mode full-lkj is not implemented; use diagonal");
  }
  if (counts.empty() || counts[0].empty()) {
    throw DataError("dp-areal: empty count matrix");
  }
  std::size_t B = counts.size();
  std::size_t G = counts[0].size();
  for (const auto& row : counts) {
    if (row.size() != G) throw DataError("dp-areal: ragged count matrix");
  }
  if (design.size() != B) {
    throw DataError("dp-areal: design rows do not match count rows");
  }
  std::size_t R = design.empty() ? 0 : design[0].size();
  if (R == 0) throw DataError("dp-areal: empty design matrix");
  for (const auto& row : design) {
    if (row.size() != R) throw DataError("dp-areal: ragged design matrix");
  }
  int K = hyper.K;

  DpArealState state;
  state.design = design;

  state.tau_lambda = sample_gamma(rng, hyper.tau_lambda_shape, hyper.tau_lambda_rate);
  state.tau_theta = sample_gamma(rng, hyper.tau_theta_shape, hyper.tau_theta_rate);
  state.tau_mu = sample_gamma(rng, hyper.tau_mu_shape, hyper.tau_mu_rate);

  state.sigma_phi.resize(R);
  for (std::size_t r = 0; r < R; ++r) {
    state.sigma_phi[r] =
        std::abs(sample_student_t(rng, hyper.sigma_phi_nu)) * hyper.sigma_phi_scale;
    if (state.sigma_phi[r] < 1e-8) state.sigma_phi[r] = 1e-8;
  }

  state.alpha = sample_gamma(rng, hyper.a_alpha, hyper.b_alpha);
  state.beta.resize(static_cast<std::size_t>(K));
  for (int k = 0; k + 1 < K; ++k) {
    state.beta[static_cast<std::size_t>(k)] = sample_beta(rng, 1.0, state.alpha);
  }
  state.beta[static_cast<std::size_t>(K - 1)] = 1.0;
  state.pi = stick_breaking(state.beta);

  state.theta_star.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    state.theta_star[static_cast<std::size_t>(k)] =
        sample_normal(rng, 0.0, 1.0 / std::sqrt(state.tau_theta));
  }
  state.phi_star.assign(static_cast<std::size_t>(K), std::vector<double>(R, 0.0));
  for (int k = 0; k < K; ++k) {
    for (std::size_t r = 0; r < R; ++r) {
      state.phi_star[static_cast<std::size_t>(k)][r] =
          sample_normal(rng, 0.0, state.sigma_phi[r]);
    }
  }
  state.mu = sample_normal(rng, 0.0, 1.0 / std::sqrt(state.tau_mu));

  state.z_comb.assign(B, std::vector<int>(G, 0));
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < G; ++i) {
      state.z_comb[b][i] =
          static_cast<int>(rng.next_below(static_cast<std::uint32_t>(K)));
    }
  }

  state.log_lambda.assign(B, std::vector<double>(G, 0.0));
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < G; ++i) {
      if (counts[b][i] < 0) throw DataError("dp-areal: negative count");
      state.log_lambda[b][i] = std::log(static_cast<double>(counts[b][i]) + 0.5);
    }
  }

  state.step_lambda.assign(B, std::vector<AdaptiveStepState>(G));
  state.step_sigma.assign(R, AdaptiveStepState{});
  return state;
}

void dp_areal_update_log_lambda(DpArealState& state,
                                const std::vector<std::vector<long long>>& counts,
                                RngStream& rng) {
  std::size_t B = state.B(), G = state.G();
  if (counts.size() != B || counts[0].size() != G) {
    throw DataError("dp-areal: count matrix does not match state");
  }
  double tau = state.tau_lambda;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < G; ++i) {
      double c = static_cast<double>(counts[b][i]);
      double m = state.cell_mean(b, i);
      if (std::isnan(m)) {
        throw NumericError("dp-areal: NaN cell mean at log_lambda[" +
                           std::to_string(b) + "][" + std::to_string(i) + "]");
      }
      auto target = [c, tau, m](double x) {
        return c * x - std::exp(x) - 0.5 * tau * (x - m) * (x - m);
      };
      auto [next, accepted] =
          adaptive_rw_update(target, state.log_lambda[b][i], state.step_lambda[b][i], rng);
      (void)accepted;
      state.log_lambda[b][i] = next;
    }
  }
}

void dp_areal_update_clusters(DpArealState& state, RngStream& rng) {
  std::size_t B = state.B(), G = state.G(), R = state.R();
  int K = static_cast<int>(state.pi.size());
  double tau = state.tau_lambda;

  // cluster means per (k, b) so the inner cell loop is a lookup
  std::vector<std::vector<double>> mean_kb(static_cast<std::size_t>(K),
                                           std::vector<double>(B, 0.0));
  for (int k = 0; k < K; ++k) {
    for (std::size_t b = 0; b < B; ++b) {
      double dot = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        dot += state.phi_star[static_cast<std::size_t>(k)][r] * state.design[b][r];
      }
      mean_kb[static_cast<std::size_t>(k)][b] =
          state.mu + state.theta_star[static_cast<std::size_t>(k)] + dot;
    }
  }
  std::vector<double> log_pi(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    double v = state.pi[static_cast<std::size_t>(k)];
    log_pi[static_cast<std::size_t>(k)] =
        v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
  }

  std::vector<double> logw(static_cast<std::size_t>(K));
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < G; ++i) {
      double x = state.log_lambda[b][i];
      for (int k = 0; k < K; ++k) {
        double d = x - mean_kb[static_cast<std::size_t>(k)][b];
        logw[static_cast<std::size_t>(k)] =
            log_pi[static_cast<std::size_t>(k)] - 0.5 * tau * d * d;
      }
      state.z_comb[b][i] = sample_categorical_log(rng, logw);
    }
  }
}

void dp_areal_update_sticks(DpArealState& state, const DpArealHyper& hyper,
                            RngStream& rng) {
  int K = hyper.K;
  std::vector<long long> n_k(static_cast<std::size_t>(K), 0);
  for (const auto& row : state.z_comb) {
    for (int z : row) n_k[static_cast<std::size_t>(z)] += 1;
  }
  std::vector<long long> tail(static_cast<std::size_t>(K) + 1, 0);
  for (int k = K - 1; k >= 0; --k) {
    tail[static_cast<std::size_t>(k)] =
        tail[static_cast<std::size_t>(k) + 1] + n_k[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k + 1 < K; ++k) {
    state.beta[static_cast<std::size_t>(k)] = sample_beta(
        rng, 1.0 + static_cast<double>(n_k[static_cast<std::size_t>(k)]),
        state.alpha + static_cast<double>(tail[static_cast<std::size_t>(k) + 1]));
  }
  state.beta[static_cast<std::size_t>(K - 1)] = 1.0;
  state.pi = stick_breaking(state.beta);

  double log_tail = 0.0;
  for (int k = 0; k + 1 < K; ++k) {
    double bk = std::min(state.beta[static_cast<std::size_t>(k)], 1.0 - 1e-12);
    log_tail += std::log(1.0 - bk);
  }
  state.alpha = sample_gamma(rng, hyper.a_alpha + static_cast<double>(K - 1),
                             hyper.b_alpha - log_tail);
}

void dp_areal_update_theta_star(DpArealState& state, RngStream& rng) {
  std::size_t B = state.B(), G = state.G(), R = state.R();
  int K = static_cast<int>(state.theta_star.size());
  std::vector<double> sum(static_cast<std::size_t>(K), 0.0);
  std::vector<long long> count(static_cast<std::size_t>(K), 0);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < G; ++i) {
      int k = state.z_comb[b][i];
      double dot = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        dot += state.phi_star[static_cast<std::size_t>(k)][r] * state.design[b][r];
      }
      sum[static_cast<std::size_t>(k)] +=
          state.log_lambda[b][i] - state.mu - dot;
      count[static_cast<std::size_t>(k)] += 1;
    }
  }
  for (int k = 0; k < K; ++k) {
    double prec = state.tau_theta +
                  state.tau_lambda * static_cast<double>(count[static_cast<std::size_t>(k)]);
    double mean = state.tau_lambda * sum[static_cast<std::size_t>(k)] / prec;
    state.theta_star[static_cast<std::size_t>(k)] =
        sample_normal(rng, mean, 1.0 / std::sqrt(prec));
  }
}

void dp_areal_update_phi_star(DpArealState& state, RngStream& rng) {
  std::size_t B = state.B(), G = state.G(), R = state.R();
  int K = static_cast<int>(state.phi_star.size());
  auto ones = one_positions(state.design);

  // members per cluster, flattened as (b, i)
  std::vector<std::vector<std::pair<int, int>>> members(static_cast<std::size_t>(K));
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < G; ++i) {
      members[static_cast<std::size_t>(state.z_comb[b][i])].push_back(
          {static_cast<int>(b), static_cast<int>(i)});
    }
  }

  for (int k = 0; k < K; ++k) {
    auto& phi_k = state.phi_star[static_cast<std::size_t>(k)];
    double theta_k = state.theta_star[static_cast<std::size_t>(k)];
    for (std::size_t r = 0; r < R; ++r) {
      double prior_var = state.sigma_phi[r] * state.sigma_phi[r];
      double sum = 0.0;
      long long cnt = 0;
      for (const auto& [bi, ii] : members[static_cast<std::size_t>(k)]) {
        std::size_t b = static_cast<std::size_t>(bi);
        if (state.design[b][r] == 0.0) continue;
        double dot_other = 0.0;
        for (int rr : ones[b]) {
          if (static_cast<std::size_t>(rr) != r) {
            dot_other += phi_k[static_cast<std::size_t>(rr)];
          }
        }
        sum += state.log_lambda[b][static_cast<std::size_t>(ii)] - state.mu -
               theta_k - dot_other;
        cnt += 1;
      }
      double prec = 1.0 / prior_var + state.tau_lambda * static_cast<double>(cnt);
      double mean = state.tau_lambda * sum / prec;
      phi_k[r] = sample_normal(rng, mean, 1.0 / std::sqrt(prec));
    }
  }
}

void dp_areal_update_precisions(DpArealState& state, const DpArealHyper& hyper,
                                RngStream& rng) {
  std::size_t B = state.B(), G = state.G();
  double rss = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < G; ++i) {
      double d = state.log_lambda[b][i] - state.cell_mean(b, i);
      rss += d * d;
    }
  }
  state.tau_lambda = sample_gamma(
      rng, hyper.tau_lambda_shape + 0.5 * static_cast<double>(B * G),
      hyper.tau_lambda_rate + 0.5 * rss);

  double theta_ss = 0.0;
  for (double t : state.theta_star) theta_ss += t * t;
  state.tau_theta = sample_gamma(
      rng, hyper.tau_theta_shape + 0.5 * static_cast<double>(state.theta_star.size()),
      hyper.tau_theta_rate + 0.5 * theta_ss);

  state.tau_mu = sample_gamma(rng, hyper.tau_mu_shape + 0.5,
                              hyper.tau_mu_rate + 0.5 * state.mu * state.mu);
}

void dp_areal_update_mu(DpArealState& state, RngStream& rng) {
  std::size_t B = state.B(), G = state.G(), R = state.R();
  double sum = 0.0;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < G; ++i) {
      int k = state.z_comb[b][i];
      double dot = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        dot += state.phi_star[static_cast<std::size_t>(k)][r] * state.design[b][r];
      }
      sum += state.log_lambda[b][i] - state.theta_star[static_cast<std::size_t>(k)] - dot;
    }
  }
  double prec = state.tau_mu + state.tau_lambda * static_cast<double>(B * G);
  double mean = state.tau_lambda * sum / prec;
  state.mu = sample_normal(rng, mean, 1.0 / std::sqrt(prec));
}

void dp_areal_update_sigma_phi(DpArealState& state, const DpArealHyper& hyper,
                               RngStream& rng) {
  std::size_t R = state.R();
  double K = static_cast<double>(state.phi_star.size());
  double nu = hyper.sigma_phi_nu;
  double scale2 = hyper.sigma_phi_scale * hyper.sigma_phi_scale;
  for (std::size_t r = 0; r < R; ++r) {
    double ss = 0.0;
    for (const auto& phi_k : state.phi_star) ss += phi_k[r] * phi_k[r];
    // random walk on eta = log sigma; the +eta term is the Jacobian
    auto target = [K, nu, scale2, ss](double eta) {
      double sigma2 = std::exp(2.0 * eta);
      return -K * eta - 0.5 * ss / sigma2 -
             0.5 * (nu + 1.0) * std::log1p(sigma2 / (nu * scale2)) + eta;
    };
    double eta = std::log(state.sigma_phi[r]);
    auto [next, accepted] = adaptive_rw_update(target, eta, state.step_sigma[r], rng);
    (void)accepted;
    state.sigma_phi[r] = std::exp(next);
  }
}

void dp_areal_sweep(DpArealState& state,
                    const std::vector<std::vector<long long>>& counts,
                    const DpArealHyper& hyper, RngStream& rng) {
  dp_areal_update_log_lambda(state, counts, rng);
  dp_areal_update_clusters(state, rng);
  dp_areal_update_sticks(state, hyper, rng);
  dp_areal_update_theta_star(state, rng);
  dp_areal_update_phi_star(state, rng);
  dp_areal_update_precisions(state, hyper, rng);
  dp_areal_update_mu(state, rng);
  dp_areal_update_sigma_phi(state, hyper, rng);
  state.iteration += 1;
}

void dp_areal_freeze_adaptation(DpArealState& state) {
  for (auto& row : state.step_lambda) {
    for (auto& step : row) step.adapting = false;
  }
  for (auto& step : state.step_sigma) step.adapting = false;
}

int dp_areal_occupied(const DpArealState& state) {
  std::set<int> seen;
  for (const auto& row : state.z_comb) seen.insert(row.begin(), row.end());
  return static_cast<int>(seen.size());
}

std::vector<double> pattern_probabilities(const DpArealState& state,
                                          std::size_t b) {
  const auto& row = state.log_lambda[b];
  double mx = row[0];
  for (double x : row) mx = std::max(mx, x);
  std::vector<double> p(row.size());
  double total = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    p[i] = std::exp(row[i] - mx);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

CategoricalDataset dp_areal_synthesize(const DpArealState& state,
                                       const CategoricalDataset& data,
                                       const PatternIndex& patterns,
                                       RngStream& rng) {
  if (patterns.size() != state.B()) {
    throw DataError("dp-areal synthesize: pattern count does not match state");
  }
  if (static_cast<std::size_t>(data.schema.sensitive_levels()) != state.G()) {
    throw DataError("dp-areal synthesize: sensitive support does not match state");
  }
  int sens = data.schema.sensitive_index();
  CategoricalDataset out = data;
  for (std::size_t b = 0; b < patterns.size(); ++b) {
    auto p = pattern_probabilities(state, b);
    for (int record : patterns.members[b]) {
      RngStream record_rng = rng.substream(static_cast<std::uint64_t>(record));
      out.cell(static_cast<std::size_t>(record), static_cast<std::size_t>(sens)) =
          sample_categorical(record_rng, p);
    }
  }
  return out;
}

SyntheticBundle dp_areal_run(const CategoricalDataset& data,
                             const DpArealHyper& hyper, const RunCfg& cfg,
                             RngStream& rng, ChainDiagnostics* diagnostics) {
  auto snapshots = replicate_snapshots(cfg);
  data.validate();

  PatternIndex patterns = build_pattern_index(data, data.schema.key_indices());
  auto counts = combination_counts(data, patterns);
  auto design = build_design_matrix(data.schema, patterns);
  DpArealState state = dp_areal_init(counts, design, hyper, rng);

  if (diagnostics != nullptr) {
    diagnostics->columns = {"iteration", "occupied_clusters", "mu", "tau_lambda"};
    diagnostics->rows.clear();
  }

  SyntheticBundle bundle;
  bundle.synthesizer = "dp-areal";
  std::size_t next_snapshot = 0;
  for (std::uint64_t it = 1; it <= cfg.iterations; ++it) {
    dp_areal_sweep(state, counts, hyper, rng);
    if (it == cfg.burn_in) dp_areal_freeze_adaptation(state);
    if (diagnostics != nullptr) {
      diagnostics->rows.push_back({static_cast<double>(it),
                                   static_cast<double>(dp_areal_occupied(state)),
                                   state.mu, state.tau_lambda});
    }
    while (next_snapshot < snapshots.size() && snapshots[next_snapshot] == it) {
      std::uint64_t stream_id = make_stream_id(
          stream_domain::synthesis, static_cast<std::uint64_t>(next_snapshot), 0);
      RngStream synth_rng = rng.substream(stream_id);
      bundle.replicates.push_back(dp_areal_synthesize(state, data, patterns, synth_rng));
      bundle.replicate_streams.push_back(stream_id);
      ++next_snapshot;
    }
  }
  return bundle;
}

void check_dp_areal_state(const DpArealState& state, const DpArealHyper& hyper) {
  std::size_t B = state.B(), G = state.G(), R = state.R();
  int K = hyper.K;
  if (B == 0 || G == 0 || R == 0) throw NumericError("dp-areal state: empty dims");
  if (static_cast<int>(state.pi.size()) != K ||
      static_cast<int>(state.beta.size()) != K ||
      static_cast<int>(state.theta_star.size()) != K ||
      static_cast<int>(state.phi_star.size()) != K) {
    throw NumericError("dp-areal state: K mismatch");
  }
  double pi_sum = 0.0;
  for (double v : state.pi) {
    if (!(v >= 0.0)) throw NumericError("dp-areal state: negative pi");
    pi_sum += v;
  }
  if (std::abs(pi_sum - 1.0) > 1e-9) {
    throw NumericError("dp-areal state: pi does not sum to 1");
  }
  if (!(state.tau_lambda > 0.0) || !(state.tau_theta > 0.0) || !(state.tau_mu > 0.0)) {
    throw NumericError("dp-areal state: precisions must be positive");
  }
  for (double s : state.sigma_phi) {
    if (!(s > 0.0)) throw NumericError("dp-areal state: sigma_phi must be positive");
  }
  if (state.z_comb.size() != B || state.log_lambda.size() != B) {
    throw NumericError("dp-areal state: B mismatch");
  }
  for (std::size_t b = 0; b < B; ++b) {
    if (state.z_comb[b].size() != G) throw NumericError("dp-areal state: G mismatch");
    for (int z : state.z_comb[b]) {
      if (z < 0 || z >= K) throw NumericError("dp-areal state: cluster id out of range");
    }
    for (double x : state.log_lambda[b]) {
      if (std::isnan(x)) throw NumericError("dp-areal state: NaN log rate");
    }
  }
}

}  // namespace synthcat
