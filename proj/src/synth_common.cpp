#include "synthcat/synth_common.hpp"

#include "synthcat/errors.hpp"

namespace synthcat {

void validate_run_cfg(const RunCfg& cfg) {
  if (cfg.iterations <= cfg.burn_in) {
    throw ConfigError("run: iterations must exceed burn_in");
  }
  if (cfg.m < 1) throw ConfigError("run: m must be at least 1");
  std::uint64_t budget = cfg.iterations - cfg.burn_in;
  if (static_cast<std::uint64_t>(cfg.m) > budget) {
    throw ConfigError("run: m exceeds available post-burn-in iterations");
  }
}

std::vector<std::uint64_t> replicate_snapshots(const RunCfg& cfg) {
  validate_run_cfg(cfg);
  std::uint64_t spacing =
      (cfg.iterations - cfg.burn_in) / static_cast<std::uint64_t>(cfg.m);
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(cfg.m));
  for (int t = 0; t < cfg.m; ++t) {
    out.push_back(cfg.burn_in + spacing * static_cast<std::uint64_t>(t + 1));
  }
  return out;
}

}  // namespace synthcat
