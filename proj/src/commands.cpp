#include "synthcat/commands.hpp"

#include <cmath>
#include <filesystem>
#include "json.hpp"

#include "synthcat/errors.hpp"
#include "synthcat/io_util.hpp"
#include "synthcat/risk.hpp"
#include "synthcat/utility.hpp"

namespace synthcat {

namespace {

using nlohmann::json;

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

void require_file(const std::string& path, const std::string& what) {
  require(!path.empty(), "config: " + what + " path is required");
  if (!std::filesystem::exists(path)) {
    throw ConfigError("config: " + what + " path does not exist: " + path);
  }
}

std::string case_label(const Schema& schema, const std::vector<int>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i > 0) out += '+';
    out += schema.variables[static_cast<std::size_t>(vars[i])].name;
  }
  return out;
}

std::string replicate_file_name(int replicate) {
  std::string num = std::to_string(replicate);
  if (num.size() < 2) num = "0" + num;
  return "replicate_" + num + ".csv";
}

void write_trace(const ChainDiagnostics& diagnostics, const std::string& path) {
  std::string out;
  for (std::size_t c = 0; c < diagnostics.columns.size(); ++c) {
    if (c > 0) out += ',';
    out += diagnostics.columns[c];
  }
  out += '\n';
  for (const auto& row : diagnostics.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

json case_stats_json(const RiskCaseStats& stats) {
  json out;
  out["expected_risk"] = stats.expected_risk;
  out["true_match_rate"] = stats.true_match_rate;
  // JSON has no NaN; undefined false match rates serialize as null with the
  // s = 0 marker alongside
  if (std::isnan(stats.false_match_rate)) {
    out["false_match_rate"] = nullptr;
  } else {
    out["false_match_rate"] = stats.false_match_rate;
  }
  out["s"] = stats.s;
  return out;
}

json case_summary_json(const RiskCaseSummary& summary) {
  json out;
  out["expected_risk"] = summary.expected_risk;
  out["true_match_rate"] = summary.true_match_rate;
  if (std::isnan(summary.false_match_rate)) {
    out["false_match_rate"] = nullptr;
  } else {
    out["false_match_rate"] = summary.false_match_rate;
  }
  out["s"] = summary.s;
  out["fmr_defined"] = summary.fmr_defined;
  return out;
}

json histogram_json(const Histogram& hist) {
  json out;
  out["lo"] = hist.lo;
  out["hi"] = hist.hi;
  out["defined"] = hist.defined;
  out["bin_counts"] = hist.bin_counts;
  return out;
}

void write_utility_files(const UtilityReport& report, const Schema& schema,
                         const std::string& reports_dir) {
  json doc;
  doc["mean"] = {{"one_way", report.mean_one_way},
                 {"two_way", report.mean_two_way},
                 {"three_way", report.mean_three_way}};
  doc["mean_per_100"] = {{"one_way", report.mean_one_way / 100.0},
                         {"two_way", report.mean_two_way / 100.0},
                         {"three_way", report.mean_three_way / 100.0}};
  doc["per_replicate"] = json::array();
  for (const auto& row : report.per_replicate) {
    doc["per_replicate"].push_back({{"replicate", row.replicate},
                                    {"one_way", row.one_way},
                                    {"two_way", row.two_way},
                                    {"three_way", row.three_way},
                                    {"one_way_per_100", row.one_way / 100.0},
                                    {"two_way_per_100", row.two_way / 100.0},
                                    {"three_way_per_100", row.three_way / 100.0}});
  }
  doc["pattern_tv"] = json::array();
  for (std::size_t rep = 0; rep < report.pmfs.size(); ++rep) {
    for (std::size_t b = 0; b < report.pmfs[rep].size(); ++b) {
      doc["pattern_tv"].push_back({{"replicate", static_cast<int>(rep) + 1},
                                   {"pattern", static_cast<int>(b) + 1},
                                   {"tv", report.pmfs[rep][b].tv}});
    }
  }
  write_text_file(reports_dir + "/utility.json", doc.dump(2) + "\n");

  std::string deviations = "arity,replicate,deviation\n";
  for (const auto& row : report.per_replicate) {
    deviations += "1," + format_int(row.replicate) + "," + format_double(row.one_way) + "\n";
    deviations += "2," + format_int(row.replicate) + "," + format_double(row.two_way) + "\n";
    deviations += "3," + format_int(row.replicate) + "," + format_double(row.three_way) + "\n";
  }
  write_text_file(reports_dir + "/utility_deviations.csv", deviations);

  std::string cells = "arity,table,replicate,cell,deviation\n";
  for (const auto& row : report.cell_deviations) {
    cells += format_int(row.arity) + "," + row.table + "," +
             format_int(row.replicate) + "," + row.cell + "," +
             format_int(row.deviation) + "\n";
  }
  write_text_file(reports_dir + "/utility_cell_deviations.csv", cells);

  std::string sens_name =
      schema.variables[static_cast<std::size_t>(schema.sensitive_index())].name;
  std::string pmfs = "pattern," + sens_name + ",source,probability\n";
  if (!report.pmfs.empty()) {
    for (std::size_t b = 0; b < report.pmfs[0].size(); ++b) {
      const auto& pmf = report.pmfs[0][b].original;
      for (std::size_t g = 0; g < pmf.size(); ++g) {
        pmfs += format_int(static_cast<int>(b) + 1) + "," +
                format_int(static_cast<int>(g) + 1) + ",original," +
                format_double(pmf[g]) + "\n";
      }
    }
    for (std::size_t rep = 0; rep < report.pmfs.size(); ++rep) {
      for (std::size_t b = 0; b < report.pmfs[rep].size(); ++b) {
        const auto& pmf = report.pmfs[rep][b].synthetic;
        for (std::size_t g = 0; g < pmf.size(); ++g) {
          pmfs += format_int(static_cast<int>(b) + 1) + "," +
                  format_int(static_cast<int>(g) + 1) + ",replicate_" +
                  format_int(static_cast<int>(rep) + 1) + "," +
                  format_double(pmf[g]) + "\n";
        }
      }
    }
  }
  write_text_file(reports_dir + "/pattern_pmfs.csv", pmfs);

  std::string tv = "pattern,replicate,tv\n";
  for (std::size_t rep = 0; rep < report.pmfs.size(); ++rep) {
    for (std::size_t b = 0; b < report.pmfs[rep].size(); ++b) {
      tv += format_int(static_cast<int>(b) + 1) + "," +
            format_int(static_cast<int>(rep) + 1) + "," +
            format_double(report.pmfs[rep][b].tv) + "\n";
    }
  }
  write_text_file(reports_dir + "/pattern_tv.csv", tv);
}

void write_risk_files(const RiskReport& report, const Schema& schema,
                      const std::string& reports_dir) {
  json doc;
  doc["cases"] = json::array();
  for (std::size_t c = 0; c < report.known_cases.size(); ++c) {
    json case_doc;
    json names = json::array();
    for (int v : report.known_cases[c]) {
      names.push_back(schema.variables[static_cast<std::size_t>(v)].name);
    }
    case_doc["known"] = names;
    case_doc["per_replicate"] = json::array();
    for (std::size_t rep = 0; rep < report.per_case[c].size(); ++rep) {
      json row = case_stats_json(report.per_case[c][rep]);
      row["replicate"] = static_cast<int>(rep) + 1;
      case_doc["per_replicate"].push_back(row);
    }
    case_doc["mean"] = case_summary_json(report.mean_by_case[c]);
    case_doc["min"] = case_summary_json(report.min_by_case[c]);
    case_doc["max"] = case_summary_json(report.max_by_case[c]);
    doc["cases"].push_back(case_doc);
  }
  doc["attribute"] = json::object();
  doc["attribute"]["per_replicate"] = json::array();
  for (std::size_t rep = 0; rep < report.attribute_counts.size(); ++rep) {
    doc["attribute"]["per_replicate"].push_back(
        {{"replicate", static_cast<int>(rep) + 1},
         {"count", report.attribute_counts[rep]},
         {"pct", report.attribute_pcts[rep]}});
  }
  doc["attribute"]["mean_count"] = report.mean_attribute_count;
  doc["attribute"]["mean_pct"] = report.mean_attribute_pct;
  write_text_file(reports_dir + "/risk.json", doc.dump(2) + "\n");

  std::string ident = "case,replicate,expected_risk,true_match_rate,false_match_rate,s\n";
  for (std::size_t c = 0; c < report.known_cases.size(); ++c) {
    std::string label = case_label(schema, report.known_cases[c]);
    for (std::size_t rep = 0; rep < report.per_case[c].size(); ++rep) {
      const auto& row = report.per_case[c][rep];
      ident += label + "," + format_int(static_cast<int>(rep) + 1) + "," +
               format_double(row.expected_risk) + "," +
               format_double(row.true_match_rate) + "," +
               format_double(row.false_match_rate) + "," + format_int(row.s) + "\n";
    }
  }
  write_text_file(reports_dir + "/risk_identification.csv", ident);

  std::string attr = "replicate,attribute_count,attribute_pct\n";
  for (std::size_t rep = 0; rep < report.attribute_counts.size(); ++rep) {
    attr += format_int(static_cast<int>(rep) + 1) + "," +
            format_int(report.attribute_counts[rep]) + "," +
            format_double(report.attribute_pcts[rep]) + "\n";
  }
  write_text_file(reports_dir + "/risk_attribute.csv", attr);
}

}  // namespace

void cmd_simulate(const RunConfig& config) {
  require(config.has_simulate, "config: simulate block is required");
  require(config.seed_set, "config: seed is required");
  require(!config.out.empty(), "config: out directory is required");
  config.simulate.validate();

  RngStream rng(config.seed, make_stream_id(stream_domain::simulate, 0, 0));
  auto [data, truth] = simulate_dataset(config.simulate, rng);

  ensure_directory(config.out);
  write_dataset(data, config.out + "/data.csv");
  write_schema(data.schema, config.out + "/schema.json");

  json truth_doc;
  truth_doc["weights"] = truth.weights;
  truth_doc["pmfs"] = json::object();
  for (std::size_t j = 0; j < data.schema.variables.size(); ++j) {
    json per_class = json::array();
    for (std::size_t c = 0; c < truth.pmfs.size(); ++c) {
      per_class.push_back(truth.pmfs[c][j]);
    }
    truth_doc["pmfs"][data.schema.variables[j].name] = per_class;
  }
  truth_doc["n"] = config.simulate.n;
  truth_doc["classes"] = config.simulate.classes;
  truth_doc["concentration"] = config.simulate.concentration;
  truth_doc["weight_concentration"] = config.simulate.weight_concentration;
  truth_doc["seed"] = config.seed;
  write_text_file(config.out + "/truth.json", truth_doc.dump(2) + "\n");
}

void cmd_synthesize(const RunConfig& config) {
  require(config.seed_set, "config: seed is required");
  require(!config.out.empty(), "config: out directory is required");
  require_file(config.resolve(config.input), "input");
  require_file(config.resolve(config.schema_path), "schema");

  Schema schema = load_schema(config.resolve(config.schema_path));
  CategoricalDataset data = load_dataset(config.resolve(config.input), schema);

  RunCfg run_cfg;
  run_cfg.m = config.m;
  ChainDiagnostics diagnostics;
  SyntheticBundle bundle;
  RngStream rng(config.seed, make_stream_id(stream_domain::chain, 0, 0));
  if (config.synthesizer == "dpmpm") {
    run_cfg.iterations = config.dpmpm_iterations;
    run_cfg.burn_in = config.dpmpm_burn_in;
    bundle = dpmpm_run(data, config.dpmpm, run_cfg, config.synthesis_mode, rng,
                       &diagnostics);
  } else {
    run_cfg.iterations = config.dp_areal_iterations;
    run_cfg.burn_in = config.dp_areal_burn_in;
    bundle = dp_areal_run(data, config.dp_areal, run_cfg, rng, &diagnostics);
  }

  ensure_directory(config.out + "/replicates");
  ensure_directory(config.out + "/traces");
  json manifest = synthesize_manifest(config);
  manifest["n"] = data.n;
  manifest["replicates"] = json::array();
  for (std::size_t rep = 0; rep < bundle.replicates.size(); ++rep) {
    Provenance prov{bundle.synthesizer, static_cast<int>(rep) + 1, config.seed};
    std::string name = replicate_file_name(static_cast<int>(rep) + 1);
    write_dataset(bundle.replicates[rep], config.out + "/replicates/" + name, &prov);
    manifest["replicates"].push_back("replicates/" + name);
  }
  manifest["replicate_streams"] = bundle.replicate_streams;
  manifest["trace"] = "traces/chain.csv";
  write_trace(diagnostics, config.out + "/traces/chain.csv");
  write_text_file(config.out + "/manifest.json", manifest.dump(2) + "\n");
}

void cmd_audit(const RunConfig& config) {
  require(!config.out.empty(), "config: out directory is required");
  require_file(config.resolve(config.input), "input");
  require_file(config.resolve(config.schema_path), "schema");
  std::string replicates_dir = config.replicates_dir.empty()
                                   ? config.out
                                   : config.resolve(config.replicates_dir);
  std::string manifest_path = replicates_dir + "/manifest.json";
  require_file(manifest_path, "replicates manifest");

  Schema schema = load_schema(config.resolve(config.schema_path));
  CategoricalDataset original = load_dataset(config.resolve(config.input), schema);
  auto known_cases = resolve_known_cases(config, schema);

  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw DataError("manifest " + manifest_path + ": " + e.what());
  }
  if (!manifest.contains("replicates") || !manifest["replicates"].is_array() ||
      manifest["replicates"].empty()) {
    throw DataError("manifest " + manifest_path + ": no replicates listed");
  }
  SyntheticBundle bundle;
  bundle.synthesizer = manifest.value("synthesizer", std::string("unknown"));
  for (const auto& rel : manifest["replicates"]) {
    std::string path = replicates_dir + "/" + rel.get<std::string>();
    bundle.replicates.push_back(load_dataset(path, schema));
  }

  UtilityReport utility = utility_report(original, bundle);
  RiskReport risk = risk_report(original, bundle, known_cases);

  std::string reports_dir = config.out + "/reports";
  ensure_directory(reports_dir);
  write_utility_files(utility, schema, reports_dir);
  write_risk_files(risk, schema, reports_dir);
}

void cmd_bounds(const RunConfig& config) {
  require(config.seed_set, "config: seed is required");
  require(!config.out.empty(), "config: out directory is required");
  require_file(config.resolve(config.input), "input");
  require_file(config.resolve(config.schema_path), "schema");

  Schema schema = load_schema(config.resolve(config.schema_path));
  CategoricalDataset original = load_dataset(config.resolve(config.input), schema);
  auto known_cases = resolve_known_cases(config, schema);

  std::string reports_dir = config.out + "/reports";
  ensure_directory(reports_dir);

  json doc;
  doc["S"] = config.bounds_S;
  doc["scenarios"] = json::object();
  RngStream rng(config.seed, make_stream_id(stream_domain::bounds, 0, 0));
  for (BoundsScenario scenario : config.bounds_scenarios) {
    BoundsReport report = bounds_run(original, scenario, config.bounds_S,
                                     known_cases, rng, config.jobs);
    std::string name = bounds_scenario_name(scenario);

    std::string flat =
        "scenario,iteration,case,expected_risk,true_match_rate,false_match_rate,"
        "attribute_count\n";
    for (const auto& row : report.iterations) {
      for (std::size_t c = 0; c < known_cases.size(); ++c) {
        flat += name + "," + format_int(row.iteration) + "," +
                case_label(schema, known_cases[c]) + "," +
                format_double(row.cases[c].expected_risk) + "," +
                format_double(row.cases[c].true_match_rate) + "," +
                format_double(row.cases[c].false_match_rate) + "," +
                format_int(row.attribute_count) + "\n";
      }
    }
    write_text_file(reports_dir + "/bounds_" + name + ".csv", flat);

    std::string hist_csv = "scenario,metric,case,bin_left,bin_right,count\n";
    auto append_hist = [&](const std::string& metric, const std::string& label,
                           const Histogram& hist) {
      double width = (hist.hi - hist.lo) / Histogram::bins;
      for (int bin = 0; bin < Histogram::bins; ++bin) {
        double left = hist.lo + width * bin;
        double right = bin + 1 == Histogram::bins ? hist.hi : hist.lo + width * (bin + 1);
        hist_csv += name + "," + metric + "," + label + "," + format_double(left) +
                    "," + format_double(right) + "," +
                    format_int(hist.bin_counts[static_cast<std::size_t>(bin)]) + "\n";
      }
    };
    for (std::size_t c = 0; c < known_cases.size(); ++c) {
      std::string label = case_label(schema, known_cases[c]);
      append_hist("expected_risk", label, report.by_case[c].expected_risk_hist);
      append_hist("true_match_rate", label, report.by_case[c].true_match_rate_hist);
      append_hist("false_match_rate", label, report.by_case[c].false_match_rate_hist);
    }
    append_hist("attribute_count", "-", report.attribute_hist);
    write_text_file(reports_dir + "/bounds_" + name + "_hist.csv", hist_csv);

    json scen;
    scen["cases"] = json::array();
    for (std::size_t c = 0; c < known_cases.size(); ++c) {
      json case_doc;
      json names = json::array();
      for (int v : known_cases[c]) {
        names.push_back(schema.variables[static_cast<std::size_t>(v)].name);
      }
      case_doc["known"] = names;
      case_doc["mean"] = case_summary_json(report.by_case[c].stats_mean);
      case_doc["min"] = case_summary_json(report.by_case[c].stats_min);
      case_doc["max"] = case_summary_json(report.by_case[c].stats_max);
      case_doc["expected_risk_hist"] = histogram_json(report.by_case[c].expected_risk_hist);
      case_doc["true_match_rate_hist"] =
          histogram_json(report.by_case[c].true_match_rate_hist);
      case_doc["false_match_rate_hist"] =
          histogram_json(report.by_case[c].false_match_rate_hist);
      scen["cases"].push_back(case_doc);
    }
    scen["attribute"] = {{"mean", report.attribute_mean},
                         {"min", report.attribute_min},
                         {"max", report.attribute_max},
                         {"hist", histogram_json(report.attribute_hist)}};
    if (scenario == BoundsScenario::max) {
      // in the maximum scenario this statistic bounds the acceptable range
      // from below, not above
      scen["false_match_rate_reading"] = "lower-bound";
    }
    doc["scenarios"][name] = scen;
  }
  write_text_file(reports_dir + "/bounds.json", doc.dump(2) + "\n");
}

}  // namespace synthcat
