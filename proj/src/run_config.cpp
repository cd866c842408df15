#include "synthcat/run_config.hpp"

#include <cstdlib>
#include <filesystem>

#include "synthcat/errors.hpp"
#include "synthcat/io_util.hpp"

namespace synthcat {

namespace {

using nlohmann::json;

std::uint64_t get_u64(const json& obj, const std::string& key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned() && !obj[key].is_number_integer()) {
    throw ConfigError("config: '" + key + "' must be an integer");
  }
  if (obj[key].is_number_integer() && obj[key].get<long long>() < 0) {
    throw ConfigError("config: '" + key + "' must be nonnegative");
  }
  return obj[key].get<std::uint64_t>();
}

int get_int(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer() && !obj[key].is_number_unsigned()) {
    throw ConfigError("config: '" + key + "' must be an integer");
  }
  return obj[key].get<int>();
}

double get_double(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError("config: '" + key + "' must be a number");
  }
  return obj[key].get<double>();
}

std::string get_string(const json& obj, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    throw ConfigError("config: '" + key + "' must be a string");
  }
  return obj[key].get<std::string>();
}

Variable parse_generator_variable(const json& item, const char* what) {
  if (!item.is_object() || !item.contains("name") || !item.contains("levels")) {
    throw ConfigError(std::string("config: simulate.") + what +
                      " entries need 'name' and 'levels'");
  }
  Variable v;
  v.name = item["name"].get<std::string>();
  v.levels = item["levels"].get<int>();
  return v;
}

}  // namespace

std::string RunConfig::resolve(const std::string& path) const {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute() || config_dir.empty()) return path;
  return (std::filesystem::path(config_dir) / p).string();
}

RunConfig load_run_config(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file " + path + ": not an object");

  RunConfig config;
  config.config_dir = std::filesystem::path(path).parent_path().string();

  config.input = get_string(doc, "input", "");
  config.schema_path = get_string(doc, "schema", "");
  config.out = get_string(doc, "out", "");
  config.replicates_dir = get_string(doc, "replicates", "");
  if (doc.contains("seed")) {
    config.seed = get_u64(doc, "seed", 0);
    config.seed_set = true;
  }
  config.synthesizer = get_string(doc, "synthesizer", "dpmpm");
  if (config.synthesizer != "dpmpm" && config.synthesizer != "dp-areal") {
    throw ConfigError("config: synthesizer must be 'dpmpm' or 'dp-areal'");
  }
  config.m = get_int(doc, "m", 20);
  if (config.m < 1) throw ConfigError("config: m must be at least 1");
  config.jobs = get_int(doc, "jobs", 1);
  if (config.jobs < 1) throw ConfigError("config: jobs must be at least 1");

  if (doc.contains("dpmpm")) {
    const json& block = doc["dpmpm"];
    if (!block.is_object()) throw ConfigError("config: 'dpmpm' must be an object");
    config.dpmpm_iterations = get_u64(block, "iterations", config.dpmpm_iterations);
    config.dpmpm_burn_in = get_u64(block, "burn_in", config.dpmpm_burn_in);
    config.dpmpm.K = get_int(block, "K", config.dpmpm.K);
    if (config.dpmpm.K < 2) throw ConfigError("config: dpmpm.K must be at least 2");
    config.dpmpm.a_alpha = get_double(block, "a_alpha", config.dpmpm.a_alpha);
    config.dpmpm.b_alpha = get_double(block, "b_alpha", config.dpmpm.b_alpha);
    config.dpmpm.dirichlet_a = get_double(block, "dirichlet_a", config.dpmpm.dirichlet_a);
    config.synthesis_mode =
        parse_synthesis_mode(get_string(block, "synthesis_mode",
                                        synthesis_mode_name(config.synthesis_mode)));
  }
  if (doc.contains("dp_areal")) {
    const json& block = doc["dp_areal"];
    if (!block.is_object()) throw ConfigError("config: 'dp_areal' must be an object");
    config.dp_areal_iterations =
        get_u64(block, "iterations", config.dp_areal_iterations);
    config.dp_areal_burn_in = get_u64(block, "burn_in", config.dp_areal_burn_in);
    config.dp_areal.K = get_int(block, "K", config.dp_areal.K);
    if (config.dp_areal.K < 2) throw ConfigError("config: dp_areal.K must be at least 2");
    config.dp_areal.a_alpha = get_double(block, "a_alpha", config.dp_areal.a_alpha);
    config.dp_areal.b_alpha = get_double(block, "b_alpha", config.dp_areal.b_alpha);
    config.dp_areal.sigma_phi_nu =
        get_double(block, "sigma_phi_nu", config.dp_areal.sigma_phi_nu);
    config.dp_areal.sigma_phi_scale =
        get_double(block, "sigma_phi_scale", config.dp_areal.sigma_phi_scale);
    config.dp_areal.covariance = parse_covariance_mode(
        get_string(block, "covariance_mode",
                   covariance_mode_name(config.dp_areal.covariance)));
  }

  if (doc.contains("known_cases")) {
    const json& cases = doc["known_cases"];
    if (!cases.is_array()) throw ConfigError("config: known_cases must be an array");
    for (const auto& item : cases) {
      if (!item.is_array() || item.empty()) {
        throw ConfigError("config: each known case must be a nonempty name array");
      }
      std::vector<std::string> names;
      for (const auto& name : item) {
        if (!name.is_string()) throw ConfigError("config: known case names must be strings");
        names.push_back(name.get<std::string>());
      }
      config.known_cases.push_back(std::move(names));
    }
  }

  if (doc.contains("bounds")) {
    const json& block = doc["bounds"];
    if (!block.is_object()) throw ConfigError("config: 'bounds' must be an object");
    config.bounds_S = get_int(block, "S", config.bounds_S);
    if (config.bounds_S < 1) throw ConfigError("config: bounds.S must be at least 1");
    if (block.contains("scenarios")) {
      if (!block["scenarios"].is_array()) {
        throw ConfigError("config: bounds.scenarios must be an array");
      }
      config.bounds_scenarios.clear();
      for (const auto& s : block["scenarios"]) {
        if (!s.is_string()) throw ConfigError("config: bounds scenario must be a string");
        config.bounds_scenarios.push_back(parse_bounds_scenario(s.get<std::string>()));
      }
      if (config.bounds_scenarios.empty()) {
        throw ConfigError("config: bounds.scenarios must not be empty");
      }
    }
  }

  if (doc.contains("simulate")) {
    const json& block = doc["simulate"];
    if (!block.is_object()) throw ConfigError("config: 'simulate' must be an object");
    config.has_simulate = true;
    config.simulate.n = get_int(block, "n", 0);
    config.simulate.classes = get_int(block, "classes", 1);
    config.simulate.concentration = get_double(block, "concentration", 1.0);
    config.simulate.weight_concentration =
        get_double(block, "weight_concentration", 0.0);
    if (!block.contains("keys") || !block["keys"].is_array()) {
      throw ConfigError("config: simulate.keys must be an array");
    }
    for (const auto& item : block["keys"]) {
      config.simulate.keys.push_back(parse_generator_variable(item, "keys"));
    }
    if (!block.contains("sensitive")) {
      throw ConfigError("config: simulate.sensitive is required");
    }
    config.simulate.sensitive =
        parse_generator_variable(block["sensitive"], "sensitive");
    config.simulate.validate();
  }

  return config;
}

void apply_overrides(RunConfig& config, const ConfigOverrides& overrides) {
  if (const char* env_out = std::getenv("SYNTHCAT_OUT");
      env_out != nullptr && env_out[0] != '\0') {
    config.out = env_out;
  }
  if (!overrides.out.empty()) config.out = overrides.out;
  if (overrides.seed_set) {
    config.seed = overrides.seed;
    config.seed_set = true;
  }
  if (overrides.jobs > 0) config.jobs = overrides.jobs;
}

std::vector<std::vector<int>> resolve_known_cases(const RunConfig& config,
                                                  const Schema& schema) {
  if (config.known_cases.empty()) return default_known_cases(schema);
  std::vector<std::vector<int>> cases;
  for (const auto& names : config.known_cases) {
    std::vector<int> indices;
    for (const auto& name : names) {
      int idx = schema.index_of(name);
      if (idx < 0) throw ConfigError("config: known case variable '" + name +
                                     "' not in schema");
      indices.push_back(idx);
    }
    cases.push_back(std::move(indices));
  }
  return cases;
}

nlohmann::json synthesize_manifest(const RunConfig& config) {
  json manifest;
  manifest["command"] = "synthesize";
  manifest["synthesizer"] = config.synthesizer;
  manifest["seed"] = config.seed;
  manifest["m"] = config.m;
  manifest["input"] = std::filesystem::path(config.input).filename().string();
  manifest["schema"] = std::filesystem::path(config.schema_path).filename().string();
  if (config.synthesizer == "dpmpm") {
    manifest["iterations"] = config.dpmpm_iterations;
    manifest["burn_in"] = config.dpmpm_burn_in;
    manifest["K"] = config.dpmpm.K;
    manifest["a_alpha"] = config.dpmpm.a_alpha;
    manifest["b_alpha"] = config.dpmpm.b_alpha;
    manifest["dirichlet_a"] = config.dpmpm.dirichlet_a;
    manifest["synthesis_mode"] = synthesis_mode_name(config.synthesis_mode);
  } else {
    manifest["iterations"] = config.dp_areal_iterations;
    manifest["burn_in"] = config.dp_areal_burn_in;
    manifest["K"] = config.dp_areal.K;
    manifest["a_alpha"] = config.dp_areal.a_alpha;
    manifest["b_alpha"] = config.dp_areal.b_alpha;
    manifest["covariance_mode"] = covariance_mode_name(config.dp_areal.covariance);
  }
  return manifest;
}

}  // namespace synthcat
