#pragma once

#include "synthcat/run_config.hpp"

namespace synthcat {

// Subcommand bodies. Each validates its configuration fully before touching
// data, writes into config.out, and throws Config/Data/NumericError on
// failure; the CLI maps those to exit codes 1/2/3.

void cmd_simulate(const RunConfig& config);
void cmd_synthesize(const RunConfig& config);
void cmd_audit(const RunConfig& config);
void cmd_bounds(const RunConfig& config);

}  // namespace synthcat
