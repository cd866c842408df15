#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synthcat/schema.hpp"

namespace synthcat {

// n records of coded categorical values, row-major. Level codes are 0-based
// in memory; row r carries the stable record id r+1. Immutable by convention
// after construction (synthesis copies, never edits in place).
struct CategoricalDataset {
  Schema schema;
  std::size_t n = 0;
  std::vector<int> cells;  // n * p, row-major

  std::size_t p() const { return schema.variables.size(); }

  int cell(std::size_t row, std::size_t var) const {
    return cells[row * p() + var];
  }
  int& cell(std::size_t row, std::size_t var) { return cells[row * p() + var]; }

  void validate() const;  // throws DataError
};

// Optional provenance stamped into replicate files as a leading comment line.
struct Provenance {
  std::string synthesizer;
  int replicate = 0;
  std::uint64_t seed = 0;
};

CategoricalDataset load_dataset(const std::string& path, const Schema& schema);
void write_dataset(const CategoricalDataset& data, const std::string& path,
                   const Provenance* provenance = nullptr);

}  // namespace synthcat
