#include "synthcat/pattern.hpp"

#include <algorithm>
#include <map>

#include "synthcat/errors.hpp"

namespace synthcat {

PatternIndex build_pattern_index(const CategoricalDataset& data,
                                 const std::vector<int>& key_vars) {
  if (key_vars.empty()) throw DataError("pattern index: empty key set");
  for (int v : key_vars) {
    if (v < 0 || v >= static_cast<int>(data.p())) {
      throw DataError("pattern index: variable index out of range");
    }
    if (data.schema.variables[v].role != Role::key) {
      throw DataError("pattern index: variable '" + data.schema.variables[v].name +
                      "' is not a key");
    }
  }

  // std::map keeps patterns lexicographic by construction
  std::map<std::vector<int>, std::vector<int>> groups;
  std::vector<int> key(key_vars.size());
  for (std::size_t i = 0; i < data.n; ++i) {
    for (std::size_t k = 0; k < key_vars.size(); ++k) {
      key[k] = data.cell(i, key_vars[k]);
    }
    groups[key].push_back(static_cast<int>(i));
  }

  PatternIndex index;
  index.key_vars = key_vars;
  index.pattern_of.assign(data.n, -1);
  index.pattern_keys.reserve(groups.size());
  index.members.reserve(groups.size());
  for (auto& [pattern_key, ids] : groups) {
    int ordinal = static_cast<int>(index.pattern_keys.size());
    for (int id : ids) index.pattern_of[id] = ordinal;
    index.pattern_keys.push_back(pattern_key);
    index.members.push_back(std::move(ids));
  }
  return index;
}

}  // namespace synthcat
