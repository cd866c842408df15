#pragma once

#include <string>
#include <vector>

#include "synthcat/dataset.hpp"
#include "synthcat/pattern.hpp"
#include "synthcat/synth_common.hpp"

namespace synthcat {

// Variable subsets for the deviation families. Every table contains the
// sensitive variable: arity 1 is {sensitive}, arity 2 pairs it with each key,
// arity 3 with each key pair. Key-only tables are identical across partial
// synthesis and carry no signal.
std::vector<std::vector<int>> table_family(const Schema& schema, int arity);

// Sum over the arity family, over cells, of |count_original - count_synthetic|.
double table_deviation(const CategoricalDataset& original,
                       const CategoricalDataset& synthetic, int arity);

struct PatternPmf {
  std::vector<double> original;   // empirical pmf over G
  std::vector<double> synthetic;  // empirical pmf over G
  double tv = 0.0;                // 0.5 * L1 distance
};

std::vector<PatternPmf> pattern_pmfs(const CategoricalDataset& original,
                                     const CategoricalDataset& synthetic,
                                     const PatternIndex& patterns);

struct UtilityReplicateRow {
  int replicate = 0;  // 1-based
  double one_way = 0.0, two_way = 0.0, three_way = 0.0;
};

// Signed per-cell deviation (synthetic - original), one row per cell of one
// table of one replicate; emitted for external density plotting.
struct CellDeviationRow {
  int arity = 0;
  std::string table;  // variable names joined with '|'
  int replicate = 0;
  std::string cell;   // 1-based level codes joined with ':'
  long long deviation = 0;
};

struct UtilityReport {
  std::vector<UtilityReplicateRow> per_replicate;
  double mean_one_way = 0.0, mean_two_way = 0.0, mean_three_way = 0.0;
  std::vector<CellDeviationRow> cell_deviations;
  std::vector<std::vector<PatternPmf>> pmfs;  // [replicate][pattern]
  std::vector<std::vector<int>> pattern_keys;  // 0-based, from the full key set
};

UtilityReport utility_report(const CategoricalDataset& original,
                             const SyntheticBundle& bundle);

}  // namespace synthcat
