#pragma once

#include <cstdint>
#include "json.hpp"
#include <string>
#include <vector>

#include "synthcat/bounds.hpp"
#include "synthcat/dp_areal.hpp"
#include "synthcat/dpmpm.hpp"
#include "synthcat/simulate.hpp"

namespace synthcat {

// One configuration document drives every subcommand; blocks irrelevant to a
// subcommand are ignored by it. The seed is mandatory, either in the file or
// via --seed; there is no wall-clock fallback.
struct RunConfig {
  std::string config_dir;  // directory of the config file, for relative paths

  std::string input;
  std::string schema_path;
  std::string out;
  std::string replicates_dir;  // audit input; defaults to `out`

  bool seed_set = false;
  std::uint64_t seed = 0;

  std::string synthesizer = "dpmpm";
  int m = 20;
  int jobs = 1;

  DpmpmHyper dpmpm;
  std::uint64_t dpmpm_iterations = 10000;
  std::uint64_t dpmpm_burn_in = 5000;
  SynthesisMode synthesis_mode = SynthesisMode::full_conditional_keys;

  DpArealHyper dp_areal;
  std::uint64_t dp_areal_iterations = 4000;
  std::uint64_t dp_areal_burn_in = 2000;

  std::vector<std::vector<std::string>> known_cases;  // empty: schema default

  int bounds_S = 100;
  std::vector<BoundsScenario> bounds_scenarios = {BoundsScenario::min,
                                                  BoundsScenario::max};

  bool has_simulate = false;
  GeneratorSpec simulate;

  // Resolve a config-relative path. Applies to input, schema, and
  // replicates; `out` is always taken relative to the working directory.
  std::string resolve(const std::string& path) const;
};

RunConfig load_run_config(const std::string& path);

// CLI and environment overrides: --seed, --out, --jobs beat the file; the
// output-dir environment variable (SYNTHCAT_OUT) sits between them.
struct ConfigOverrides {
  bool seed_set = false;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 0;
};

void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

// known_cases resolved to schema variable indices (config names, or the
// nested-prefix default when the config leaves them unset).
std::vector<std::vector<int>> resolve_known_cases(const RunConfig& config,
                                                  const Schema& schema);

// Manifest fields that depend only on the configuration; cmd_synthesize adds
// the produced file lists. Factored out so run shapes can be checked without
// running a chain.
nlohmann::json synthesize_manifest(const RunConfig& config);

}  // namespace synthcat
