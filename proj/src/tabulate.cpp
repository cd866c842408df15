#include "synthcat/tabulate.hpp"

#include <set>

#include "synthcat/errors.hpp"

namespace synthcat {

ContingencyTable cross_tabulate(const CategoricalDataset& data,
                                const std::vector<int>& dims) {
  if (dims.empty()) throw DataError("cross_tabulate: empty dim list");
  std::set<int> seen;
  for (int d : dims) {
    if (d < 0 || d >= static_cast<int>(data.p())) {
      throw DataError("cross_tabulate: variable index out of range");
    }
    if (!seen.insert(d).second) {
      throw DataError("cross_tabulate: duplicate variable in dims");
    }
  }

  ContingencyTable table;
  table.dims = dims;
  std::size_t size = 1;
  for (int d : dims) {
    table.extents.push_back(data.schema.variables[d].levels);
    size *= static_cast<std::size_t>(data.schema.variables[d].levels);
  }
  table.cells.assign(size, 0);

  std::vector<int> levels(dims.size());
  for (std::size_t i = 0; i < data.n; ++i) {
    for (std::size_t a = 0; a < dims.size(); ++a) {
      levels[a] = data.cell(i, dims[a]);
    }
    table.cells[table.flat_index(levels)] += 1;
  }
  table.total = static_cast<long long>(data.n);
  return table;
}

ContingencyTable marginalize(const ContingencyTable& table, int axis) {
  if (axis < 0 || axis >= static_cast<int>(table.dims.size())) {
    throw DataError("marginalize: axis out of range");
  }
  if (table.dims.size() == 1) {
    throw DataError("marginalize: cannot drop the only axis");
  }
  ContingencyTable out;
  for (std::size_t a = 0; a < table.dims.size(); ++a) {
    if (static_cast<int>(a) == axis) continue;
    out.dims.push_back(table.dims[a]);
    out.extents.push_back(table.extents[a]);
  }
  std::size_t size = 1;
  for (int e : out.extents) size *= static_cast<std::size_t>(e);
  out.cells.assign(size, 0);
  out.total = table.total;

  std::vector<int> levels(table.dims.size(), 0);
  for (std::size_t flat = 0; flat < table.cells.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t a = table.dims.size(); a-- > 0;) {
      levels[a] = static_cast<int>(rem % static_cast<std::size_t>(table.extents[a]));
      rem /= static_cast<std::size_t>(table.extents[a]);
    }
    std::vector<int> reduced;
    reduced.reserve(out.dims.size());
    for (std::size_t a = 0; a < table.dims.size(); ++a) {
      if (static_cast<int>(a) != axis) reduced.push_back(levels[a]);
    }
    out.cells[out.flat_index(reduced)] += table.cells[flat];
  }
  return out;
}

std::vector<std::vector<long long>> combination_counts(
    const CategoricalDataset& data, const PatternIndex& patterns) {
  int G = data.schema.sensitive_levels();
  int sens = data.schema.sensitive_index();
  std::vector<std::vector<long long>> counts(
      patterns.size(), std::vector<long long>(static_cast<std::size_t>(G), 0));
  for (std::size_t b = 0; b < patterns.size(); ++b) {
    for (int record : patterns.members[b]) {
      counts[b][static_cast<std::size_t>(data.cell(record, sens))] += 1;
    }
  }
  return counts;
}

}  // namespace synthcat
