#pragma once

#include <string>
#include <vector>

namespace synthcat {

enum class Role { key, sensitive };

struct Variable {
  std::string name;
  int levels = 0;  // d_j, at least 2
  Role role = Role::key;
};

// Ordered variable list with exactly one sensitive variable and at least one
// key. Level codes are 1..d_j in files and 0..d_j-1 in memory; the shift
// happens at the file boundary and nowhere else.
struct Schema {
  std::vector<Variable> variables;

  void validate() const;  // throws DataError on violation

  int sensitive_index() const;
  std::vector<int> key_indices() const;
  int index_of(const std::string& name) const;  // -1 if absent
  int sensitive_levels() const { return variables[sensitive_index()].levels; }
};

Schema load_schema(const std::string& path);
void write_schema(const Schema& schema, const std::string& path);

std::string role_name(Role role);
Role parse_role(const std::string& text);

}  // namespace synthcat
