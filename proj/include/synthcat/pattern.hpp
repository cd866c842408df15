#pragma once

#include <vector>

#include "synthcat/dataset.hpp"

namespace synthcat {

// Partition of record indices by the observed cross-classification of a key
// subset. Patterns are ordered lexicographically by level codes so ordinals
// are stable across runs and machines.
struct PatternIndex {
  std::vector<int> key_vars;                    // schema variable indices
  std::vector<std::vector<int>> pattern_keys;   // level codes per pattern
  std::vector<std::vector<int>> members;        // record indices per pattern
  std::vector<int> pattern_of;                  // record index -> pattern ordinal

  std::size_t size() const { return pattern_keys.size(); }
};

PatternIndex build_pattern_index(const CategoricalDataset& data,
                                 const std::vector<int>& key_vars);

}  // namespace synthcat
