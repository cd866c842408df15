#pragma once

#include <span>
#include <utility>
#include <vector>

#include "synthcat/dataset.hpp"
#include "synthcat/rng.hpp"

namespace synthcat {

// Finite latent-class generator standing in for the survey extract: class
// weights are one Dirichlet draw, each class's per-variable pmfs are Dirichlet
// draws, and records sample a class then each variable independently.
struct GeneratorSpec {
  int n = 0;
  std::vector<Variable> keys;  // role field ignored, treated as keys
  Variable sensitive;          // treated as the sensitive variable
  int classes = 1;
  double concentration = 1.0;         // per-variable pmf Dirichlet
  double weight_concentration = 0.0;  // class weights; 0 means use concentration

  void validate() const;
  Schema schema() const;  // keys in order, sensitive last
};

// The exact generating parameters, the oracle for recovery tests.
struct GeneratorTruth {
  std::vector<double> weights;                          // [class]
  std::vector<std::vector<std::vector<double>>> pmfs;   // [class][var][level]
};

std::pair<CategoricalDataset, GeneratorTruth> simulate_dataset(
    const GeneratorSpec& spec, RngStream& rng);

// True conditional pmf of the sensitive variable given key levels, from the
// generating mixture.
std::vector<double> generator_conditional_pmf(const GeneratorTruth& truth,
                                              const Schema& schema,
                                              std::span<const int> key_levels);

}  // namespace synthcat
