#include "synthcat/dataset.hpp"

#include <charconv>
#include <sstream>
#include <string>

#include "synthcat/errors.hpp"
#include "synthcat/io_util.hpp"

namespace synthcat {

namespace {

int parse_level(const std::string& field, const Variable& var,
                std::size_t file_row) {
  std::string trimmed = field;
  while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' ')) {
    trimmed.pop_back();
  }
  std::size_t start = 0;
  while (start < trimmed.size() && trimmed[start] == ' ') ++start;
  trimmed = trimmed.substr(start);
  if (trimmed.empty()) {
    throw DataError("row " + std::to_string(file_row) + ", column '" + var.name +
                    "': missing value");
  }
  int value = 0;
  auto res = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  if (res.ec != std::errc() || res.ptr != trimmed.data() + trimmed.size()) {
    throw DataError("row " + std::to_string(file_row) + ", column '" + var.name +
                    "': not an integer level code: '" + trimmed + "'");
  }
  if (value < 1 || value > var.levels) {
    throw DataError("row " + std::to_string(file_row) + ", column '" + var.name +
                    "': level " + std::to_string(value) + " outside 1.." +
                    std::to_string(var.levels));
  }
  return value - 1;
}

}  // namespace

void CategoricalDataset::validate() const {
  schema.validate();
  if (n < 1) throw DataError("dataset: no records");
  if (cells.size() != n * p()) throw DataError("dataset: cell storage size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p(); ++j) {
      int v = cell(i, j);
      if (v < 0 || v >= schema.variables[j].levels) {
        throw DataError("dataset: row " + std::to_string(i + 1) + ", column '" +
                        schema.variables[j].name + "': code out of range");
      }
    }
  }
}

CategoricalDataset load_dataset(const std::string& path, const Schema& schema) {
  schema.validate();
  std::string content = read_text_file(path);
  std::istringstream in(content);
  std::string line;

  // skip provenance comments ahead of the header
  std::string header;
  std::size_t file_row = 0;
  while (std::getline(in, line)) {
    ++file_row;
    if (!line.empty() && line[0] == '#') continue;
    header = line;
    break;
  }
  if (header.empty()) throw DataError(path + ": missing header row");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  auto names = split(header, ',');
  if (names.size() != schema.variables.size()) {
    throw DataError(path + ": header has " + std::to_string(names.size()) +
                    " columns, schema declares " +
                    std::to_string(schema.variables.size()));
  }
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] != schema.variables[j].name) {
      throw DataError(path + ": column " + std::to_string(j + 1) + " is '" +
                      names[j] + "', schema expects '" +
                      schema.variables[j].name + "'");
    }
  }

  CategoricalDataset data;
  data.schema = schema;
  std::size_t record = 0;
  while (std::getline(in, line)) {
    ++file_row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    auto fields = split(line, ',');
    if (fields.size() != schema.variables.size()) {
      throw DataError(path + ": row " + std::to_string(record + 1) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(schema.variables.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      data.cells.push_back(parse_level(fields[j], schema.variables[j], record + 1));
    }
    ++record;
  }
  if (record == 0) throw DataError(path + ": no data rows");
  data.n = record;
  return data;
}

void write_dataset(const CategoricalDataset& data, const std::string& path,
                   const Provenance* provenance) {
  std::string out;
  out.reserve(data.n * data.p() * 4 + 64);
  if (provenance != nullptr) {
    out += "# synthesizer=" + provenance->synthesizer +
           " replicate=" + format_int(provenance->replicate) +
           " seed=" + std::to_string(provenance->seed) + "\n";
  }
  for (std::size_t j = 0; j < data.p(); ++j) {
    if (j > 0) out += ',';
    out += data.schema.variables[j].name;
  }
  out += '\n';
  for (std::size_t i = 0; i < data.n; ++i) {
    for (std::size_t j = 0; j < data.p(); ++j) {
      if (j > 0) out += ',';
      out += format_int(data.cell(i, j) + 1);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace synthcat
