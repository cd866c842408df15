#include "synthcat/simulate.hpp"

#include <cmath>

#include "synthcat/distributions.hpp"
#include "synthcat/errors.hpp"

namespace synthcat {

void GeneratorSpec::validate() const {
  if (n < 1) throw ConfigError("simulate: n must be at least 1");
  if (classes < 1) throw ConfigError("simulate: classes must be at least 1");
  if (keys.empty()) throw ConfigError("simulate: at least one key variable");
  for (const auto& v : keys) {
    if (v.name.empty()) throw ConfigError("simulate: unnamed key variable");
    if (v.levels < 2) {
      throw ConfigError("simulate: key '" + v.name + "' needs at least 2 levels");
    }
  }
  if (sensitive.name.empty()) throw ConfigError("simulate: unnamed sensitive variable");
  if (sensitive.levels < 2) {
    throw ConfigError("simulate: sensitive variable needs at least 2 levels");
  }
  if (!(concentration > 0.0)) {
    throw ConfigError("simulate: concentration must be positive");
  }
  if (weight_concentration < 0.0) {
    throw ConfigError("simulate: weight_concentration must be nonnegative");
  }
}

Schema GeneratorSpec::schema() const {
  Schema schema;
  for (const auto& v : keys) {
    schema.variables.push_back({v.name, v.levels, Role::key});
  }
  schema.variables.push_back({sensitive.name, sensitive.levels, Role::sensitive});
  schema.validate();
  return schema;
}

std::pair<CategoricalDataset, GeneratorTruth> simulate_dataset(
    const GeneratorSpec& spec, RngStream& rng) {
  spec.validate();
  Schema schema = spec.schema();
  std::size_t p = schema.variables.size();
  int C = spec.classes;

  GeneratorTruth truth;
  double wc = spec.weight_concentration > 0.0 ? spec.weight_concentration
                                              : spec.concentration;
  std::vector<double> weight_alpha(static_cast<std::size_t>(C), wc);
  truth.weights = sample_dirichlet(rng, weight_alpha);
  truth.pmfs.resize(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    truth.pmfs[static_cast<std::size_t>(c)].resize(p);
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<double> alpha(
          static_cast<std::size_t>(schema.variables[j].levels), spec.concentration);
      truth.pmfs[static_cast<std::size_t>(c)][j] = sample_dirichlet(rng, alpha);
    }
  }

  CategoricalDataset data;
  data.schema = schema;
  data.n = static_cast<std::size_t>(spec.n);
  data.cells.resize(data.n * p);
  for (std::size_t i = 0; i < data.n; ++i) {
    RngStream record_rng = rng.substream(i);
    int c = sample_categorical(record_rng, truth.weights);
    for (std::size_t j = 0; j < p; ++j) {
      data.cell(i, j) =
          sample_categorical(record_rng, truth.pmfs[static_cast<std::size_t>(c)][j]);
    }
  }
  return {std::move(data), std::move(truth)};
}

std::vector<double> generator_conditional_pmf(const GeneratorTruth& truth,
                                              const Schema& schema,
                                              std::span<const int> key_levels) {
  auto keys = schema.key_indices();
  if (key_levels.size() != keys.size()) {
    throw DataError("generator pmf: key level count mismatch");
  }
  std::size_t sens = static_cast<std::size_t>(schema.sensitive_index());
  std::size_t G = static_cast<std::size_t>(schema.sensitive_levels());

  std::vector<double> pmf(G, 0.0);
  double total = 0.0;
  for (std::size_t c = 0; c < truth.weights.size(); ++c) {
    double w = truth.weights[c];
    for (std::size_t k = 0; k < keys.size(); ++k) {
      w *= truth.pmfs[c][static_cast<std::size_t>(keys[k])]
                     [static_cast<std::size_t>(key_levels[k])];
    }
    for (std::size_t g = 0; g < G; ++g) {
      pmf[g] += w * truth.pmfs[c][sens][g];
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw NumericError("generator pmf: key combination has zero probability");
  }
  for (double& v : pmf) v /= total;
  return pmf;
}

}  // namespace synthcat
