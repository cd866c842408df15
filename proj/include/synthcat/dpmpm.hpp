#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synthcat/dataset.hpp"
#include "synthcat/rng.hpp"
#include "synthcat/synth_common.hpp"

namespace synthcat {

struct DpmpmHyper {
  int K = 40;
  double a_alpha = 0.25;
  double b_alpha = 0.25;
  // Concentration of the Dirichlet prior on every theta[k][j]; expanded to a
  // flat vector per variable.
  double dirichlet_a = 1.0;
};

// Latent-class mixture state. Class ids are 0-based; beta[K-1] is pinned at 1
// and pi is the stick-breaking transform of beta at all times.
struct DpmpmState {
  std::vector<int> z;                               // class per record
  std::vector<double> beta;                         // K stick fractions
  std::vector<double> pi;                           // K weights
  double alpha = 1.0;                               // DP concentration
  std::vector<std::vector<std::vector<double>>> theta;  // [K][var][level]
  std::uint64_t iteration = 0;
};

enum class SynthesisMode { full_conditional_keys, marginal, chain_state };

std::string synthesis_mode_name(SynthesisMode mode);
SynthesisMode parse_synthesis_mode(const std::string& text);

DpmpmState dpmpm_init(const CategoricalDataset& data, const DpmpmHyper& hyper,
                      RngStream& rng);

// One blocked Gibbs scan: z, then beta/pi, then alpha, then theta.
void dpmpm_sweep(DpmpmState& state, const CategoricalDataset& data,
                 const DpmpmHyper& hyper, RngStream& rng);

int occupied_classes(const DpmpmState& state);

// Copy of `data` with the sensitive column redrawn. Per record, a class z*
// is chosen according to `mode`, then the sensitive level is drawn from
// theta[z*][sensitive]. Draws come from per-record substreams of `rng`, so
// the result depends only on the stream identity, not on consumed state.
CategoricalDataset dpmpm_synthesize(const DpmpmState& state,
                                    const CategoricalDataset& data,
                                    SynthesisMode mode, RngStream& rng);

// Runs the chain on `rng`, snapshotting replicates at evenly spaced
// post-burn-in iterations; replicate t synthesizes from the substream
// rng.substream(make_stream_id(stream_domain::synthesis, t, 0)).
SyntheticBundle dpmpm_run(const CategoricalDataset& data, const DpmpmHyper& hyper,
                          const RunCfg& cfg, SynthesisMode mode, RngStream& rng,
                          ChainDiagnostics* diagnostics);

void check_dpmpm_state(const DpmpmState& state, const CategoricalDataset& data,
                       const DpmpmHyper& hyper);

}  // namespace synthcat
