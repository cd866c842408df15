// synthcat: fit, synthesize, and audit partially synthetic categorical data.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "synthcat/commands.hpp"
#include "synthcat/errors.hpp"
#include "synthcat/run_config.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  synthcat::ConfigOverrides overrides;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration (JSON)")
      ->required();
  cmd->add_option("--seed", args.overrides.seed, "seed override")
      ->each([&args](const std::string&) { args.overrides.seed_set = true; });
  cmd->add_option("--out", args.overrides.out, "output directory override");
  cmd->add_option("--jobs", args.overrides.jobs, "worker thread count")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partially synthetic categorical data engine"};
  app.require_subcommand(1);

  CliArgs args;
  CLI::App* simulate = app.add_subcommand("simulate", "draw a dataset from a generator spec");
  CLI::App* synthesize = app.add_subcommand("synthesize", "fit a synthesizer and write replicates");
  CLI::App* audit = app.add_subcommand("audit", "utility and risk reports for a replicate set");
  CLI::App* bounds = app.add_subcommand("bounds", "inherent-risk bounds by resampling");
  for (CLI::App* cmd : {simulate, synthesize, audit, bounds}) {
    add_common_options(cmd, args);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    synthcat::RunConfig config = synthcat::load_run_config(args.config_path);
    synthcat::apply_overrides(config, args.overrides);
    if (simulate->parsed()) {
      synthcat::cmd_simulate(config);
    } else if (synthesize->parsed()) {
      synthcat::cmd_synthesize(config);
    } else if (audit->parsed()) {
      synthcat::cmd_audit(config);
    } else {
      synthcat::cmd_bounds(config);
    }
  } catch (const synthcat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const synthcat::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const synthcat::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
