#include "synthcat/utility.hpp"

#include <cmath>
#include <cstdlib>

#include "synthcat/errors.hpp"
#include "synthcat/io_util.hpp"
#include "synthcat/tabulate.hpp"

namespace synthcat {

namespace {

void check_same_schema(const CategoricalDataset& a, const CategoricalDataset& b) {
  if (a.n != b.n || a.p() != b.p()) {
    throw DataError("utility: datasets differ in shape");
  }
  for (std::size_t j = 0; j < a.p(); ++j) {
    const auto& va = a.schema.variables[j];
    const auto& vb = b.schema.variables[j];
    if (va.name != vb.name || va.levels != vb.levels || va.role != vb.role) {
      throw DataError("utility: schema mismatch at variable '" + va.name + "'");
    }
  }
}

std::string table_name(const Schema& schema, const std::vector<int>& dims) {
  std::string out;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    if (a > 0) out += '|';
    out += schema.variables[static_cast<std::size_t>(dims[a])].name;
  }
  return out;
}

std::string cell_name(const ContingencyTable& table, std::size_t flat) {
  std::vector<int> levels(table.dims.size());
  std::size_t rem = flat;
  for (std::size_t a = table.dims.size(); a-- > 0;) {
    levels[a] = static_cast<int>(rem % static_cast<std::size_t>(table.extents[a]));
    rem /= static_cast<std::size_t>(table.extents[a]);
  }
  std::string out;
  for (std::size_t a = 0; a < levels.size(); ++a) {
    if (a > 0) out += ':';
    out += format_int(levels[a] + 1);
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> table_family(const Schema& schema, int arity) {
  if (arity < 1 || arity > 3) throw ConfigError("table family: arity must be 1, 2, or 3");
  int sens = schema.sensitive_index();
  auto keys = schema.key_indices();
  std::vector<std::vector<int>> family;
  if (arity == 1) {
    family.push_back({sens});
  } else if (arity == 2) {
    for (int k : keys) family.push_back({sens, k});
  } else {
    for (std::size_t a = 0; a < keys.size(); ++a) {
      for (std::size_t b = a + 1; b < keys.size(); ++b) {
        family.push_back({sens, keys[a], keys[b]});
      }
    }
  }
  return family;
}

double table_deviation(const CategoricalDataset& original,
                       const CategoricalDataset& synthetic, int arity) {
  check_same_schema(original, synthetic);
  long long total = 0;
  for (const auto& dims : table_family(original.schema, arity)) {
    auto to = cross_tabulate(original, dims);
    auto ts = cross_tabulate(synthetic, dims);
    for (std::size_t c = 0; c < to.cells.size(); ++c) {
      total += std::llabs(to.cells[c] - ts.cells[c]);
    }
  }
  return static_cast<double>(total);
}

std::vector<PatternPmf> pattern_pmfs(const CategoricalDataset& original,
                                     const CategoricalDataset& synthetic,
                                     const PatternIndex& patterns) {
  check_same_schema(original, synthetic);
  int sens = original.schema.sensitive_index();
  std::size_t G = static_cast<std::size_t>(original.schema.sensitive_levels());

  std::vector<PatternPmf> out(patterns.size());
  for (std::size_t b = 0; b < patterns.size(); ++b) {
    auto& rec = out[b];
    rec.original.assign(G, 0.0);
    rec.synthetic.assign(G, 0.0);
    double nb = static_cast<double>(patterns.members[b].size());
    for (int record : patterns.members[b]) {
      rec.original[static_cast<std::size_t>(
          original.cell(static_cast<std::size_t>(record), static_cast<std::size_t>(sens)))] += 1.0;
      rec.synthetic[static_cast<std::size_t>(
          synthetic.cell(static_cast<std::size_t>(record), static_cast<std::size_t>(sens)))] += 1.0;
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < G; ++i) {
      rec.original[i] /= nb;
      rec.synthetic[i] /= nb;
      l1 += std::abs(rec.original[i] - rec.synthetic[i]);
    }
    rec.tv = 0.5 * l1;
  }
  return out;
}

UtilityReport utility_report(const CategoricalDataset& original,
                             const SyntheticBundle& bundle) {
  if (bundle.replicates.empty()) throw DataError("utility report: empty bundle");
  UtilityReport report;
  PatternIndex patterns =
      build_pattern_index(original, original.schema.key_indices());
  report.pattern_keys = patterns.pattern_keys;

  double sum1 = 0.0, sum2 = 0.0, sum3 = 0.0;
  for (std::size_t rep = 0; rep < bundle.replicates.size(); ++rep) {
    const auto& synthetic = bundle.replicates[rep];
    UtilityReplicateRow row;
    row.replicate = static_cast<int>(rep) + 1;
    row.one_way = table_deviation(original, synthetic, 1);
    row.two_way = table_deviation(original, synthetic, 2);
    row.three_way = table_deviation(original, synthetic, 3);
    sum1 += row.one_way;
    sum2 += row.two_way;
    sum3 += row.three_way;
    report.per_replicate.push_back(row);

    for (int arity = 1; arity <= 3; ++arity) {
      for (const auto& dims : table_family(original.schema, arity)) {
        auto to = cross_tabulate(original, dims);
        auto ts = cross_tabulate(synthetic, dims);
        std::string name = table_name(original.schema, dims);
        for (std::size_t c = 0; c < to.cells.size(); ++c) {
          CellDeviationRow cd;
          cd.arity = arity;
          cd.table = name;
          cd.replicate = row.replicate;
          cd.cell = cell_name(to, c);
          cd.deviation = ts.cells[c] - to.cells[c];
          report.cell_deviations.push_back(std::move(cd));
        }
      }
    }

    report.pmfs.push_back(pattern_pmfs(original, synthetic, patterns));
  }
  double m = static_cast<double>(bundle.replicates.size());
  report.mean_one_way = sum1 / m;
  report.mean_two_way = sum2 / m;
  report.mean_three_way = sum3 / m;
  return report;
}

}  // namespace synthcat
