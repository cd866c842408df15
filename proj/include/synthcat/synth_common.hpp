#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synthcat/dataset.hpp"

namespace synthcat {

struct RunCfg {
  std::uint64_t iterations = 0;
  std::uint64_t burn_in = 0;
  int m = 1;
};

// m replicates, each a copy of the original with only the sensitive column
// replaced. replicate_seeds records the stream identity used per replicate.
struct SyntheticBundle {
  std::string synthesizer;
  std::vector<CategoricalDataset> replicates;
  std::vector<std::uint64_t> replicate_streams;
};

// Per-iteration scalar traces, written as a delimited file by the CLI.
struct ChainDiagnostics {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Iterations (1-based) at which replicates are snapshot: evenly spaced
// post-burn-in, spacing floor((iterations - burn_in) / m). Throws when m
// exceeds the post-burn-in budget.
std::vector<std::uint64_t> replicate_snapshots(const RunCfg& cfg);

void validate_run_cfg(const RunCfg& cfg);

}  // namespace synthcat
