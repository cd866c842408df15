#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synthcat/adaptive_rw.hpp"
#include "synthcat/dataset.hpp"
#include "synthcat/pattern.hpp"
#include "synthcat/rng.hpp"
#include "synthcat/synth_common.hpp"

namespace synthcat {

enum class CovarianceMode { diagonal, full_lkj };

std::string covariance_mode_name(CovarianceMode mode);
CovarianceMode parse_covariance_mode(const std::string& text);

struct DpArealHyper {
  int K = 50;
  double a_alpha = 1.0;
  double b_alpha = 1.0;
  double tau_theta_shape = 1.0, tau_theta_rate = 1.0;
  double tau_mu_shape = 1.0, tau_mu_rate = 1.0;
  double tau_lambda_shape = 1.0, tau_lambda_rate = 1.0;
  double sigma_phi_nu = 3.0;     // half-t degrees of freedom
  double sigma_phi_scale = 1.0;  // half-t scale
  CovarianceMode covariance = CovarianceMode::diagonal;
};

// Poisson-lognormal state over B patterns x G sensitive levels. Cluster ids
// are 0-based. Cell (b, i) has log rate log_lambda[b][i], cluster
// z_comb[b][i], and model mean mu + theta_star[z] + phi_star[z] . design[b].
struct DpArealState {
  double mu = 0.0;
  std::vector<std::vector<double>> log_lambda;  // B x G
  std::vector<std::vector<int>> z_comb;         // B x G
  std::vector<double> beta;                     // K sticks, last = 1
  std::vector<double> pi;                       // K
  double alpha = 1.0;                           // DP concentration
  std::vector<double> theta_star;               // K
  std::vector<std::vector<double>> phi_star;    // K x R
  double tau_lambda = 1.0, tau_theta = 1.0, tau_mu = 1.0;
  std::vector<double> sigma_phi;                // R
  std::vector<std::vector<double>> design;      // B x R, binary
  std::uint64_t iteration = 0;

  // Metropolis bookkeeping lives with the chain so adaptation freezes with it.
  std::vector<std::vector<AdaptiveStepState>> step_lambda;  // B x G
  std::vector<AdaptiveStepState> step_sigma;                // R

  std::size_t B() const { return log_lambda.size(); }
  std::size_t G() const { return log_lambda.empty() ? 0 : log_lambda[0].size(); }
  std::size_t R() const { return design.empty() ? 0 : design[0].size(); }

  double cell_mean(std::size_t b, std::size_t i) const {
    int k = z_comb[b][i];
    double dot = 0.0;
    for (std::size_t r = 0; r < R(); ++r) {
      dot += phi_star[static_cast<std::size_t>(k)][r] * design[b][r];
    }
    return mu + theta_star[static_cast<std::size_t>(k)] + dot;
  }
};

// Design matrix of the key-category indicators: one column per (key variable,
// level) pair in patterns.key_vars order, ones marking the pattern's levels.
// R = sum of level counts over the key variables.
std::vector<std::vector<double>> build_design_matrix(const Schema& schema,
                                                     const PatternIndex& patterns);

DpArealState dp_areal_init(const std::vector<std::vector<long long>>& counts,
                           const std::vector<std::vector<double>>& design,
                           const DpArealHyper& hyper, RngStream& rng);

// Sweep phases, exposed individually so conditionals can be validated in
// isolation against quadrature and closed-form oracles.
void dp_areal_update_log_lambda(DpArealState& state,
                                const std::vector<std::vector<long long>>& counts,
                                RngStream& rng);
void dp_areal_update_clusters(DpArealState& state, RngStream& rng);
void dp_areal_update_sticks(DpArealState& state, const DpArealHyper& hyper,
                            RngStream& rng);
void dp_areal_update_theta_star(DpArealState& state, RngStream& rng);
void dp_areal_update_phi_star(DpArealState& state, RngStream& rng);
void dp_areal_update_precisions(DpArealState& state, const DpArealHyper& hyper,
                                RngStream& rng);
void dp_areal_update_mu(DpArealState& state, RngStream& rng);
void dp_areal_update_sigma_phi(DpArealState& state, const DpArealHyper& hyper,
                               RngStream& rng);

void dp_areal_sweep(DpArealState& state,
                    const std::vector<std::vector<long long>>& counts,
                    const DpArealHyper& hyper, RngStream& rng);

void dp_areal_freeze_adaptation(DpArealState& state);

int dp_areal_occupied(const DpArealState& state);

// Within-pattern synthesis probabilities p_i = lambda_i / sum(lambda), from
// the current log rates of pattern b.
std::vector<double> pattern_probabilities(const DpArealState& state,
                                          std::size_t b);

CategoricalDataset dp_areal_synthesize(const DpArealState& state,
                                       const CategoricalDataset& data,
                                       const PatternIndex& patterns,
                                       RngStream& rng);

SyntheticBundle dp_areal_run(const CategoricalDataset& data,
                             const DpArealHyper& hyper, const RunCfg& cfg,
                             RngStream& rng, ChainDiagnostics* diagnostics);

void check_dp_areal_state(const DpArealState& state, const DpArealHyper& hyper);

}  // namespace synthcat
