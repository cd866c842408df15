#pragma once

#include <span>
#include <vector>

#include "synthcat/dataset.hpp"
#include "synthcat/pattern.hpp"

namespace synthcat {

// Dense count table over the full level cross-product of `dims`; unobserved
// combinations are present and hold zero.
struct ContingencyTable {
  std::vector<int> dims;       // schema variable indices, in table axis order
  std::vector<int> extents;    // levels per axis
  std::vector<long long> cells;  // row-major dense
  long long total = 0;

  std::size_t flat_index(std::span<const int> levels) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < extents.size(); ++a) {
      idx = idx * static_cast<std::size_t>(extents[a]) +
            static_cast<std::size_t>(levels[a]);
    }
    return idx;
  }

  long long at(std::span<const int> levels) const {
    return cells[flat_index(levels)];
  }
};

ContingencyTable cross_tabulate(const CategoricalDataset& data,
                                const std::vector<int>& dims);

// Sum a table over one axis, producing the table on the remaining dims.
ContingencyTable marginalize(const ContingencyTable& table, int axis);

// B x G matrix of counts: entry (b, i) is the number of records in pattern b
// whose sensitive value is i. Rows sum to pattern sizes; zeros kept.
std::vector<std::vector<long long>> combination_counts(
    const CategoricalDataset& data, const PatternIndex& patterns);

}  // namespace synthcat
