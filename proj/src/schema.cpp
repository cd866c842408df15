#include "synthcat/schema.hpp"

#include "json.hpp"

#include "synthcat/errors.hpp"
#include "synthcat/io_util.hpp"

namespace synthcat {

void Schema::validate() const {
  if (variables.empty()) throw DataError("schema: no variables");
  int sensitive_count = 0;
  int key_count = 0;
  for (const auto& v : variables) {
    if (v.name.empty()) throw DataError("schema: unnamed variable");
    if (v.levels < 2) {
      throw DataError("schema: variable '" + v.name + "' needs at least 2 levels");
    }
    if (v.role == Role::sensitive) {
      ++sensitive_count;
    } else {
      ++key_count;
    }
  }
  for (std::size_t i = 0; i < variables.size(); ++i) {
    for (std::size_t j = i + 1; j < variables.size(); ++j) {
      if (variables[i].name == variables[j].name) {
        throw DataError("schema: duplicate variable name '" + variables[i].name + "'");
      }
    }
  }
  if (sensitive_count != 1) {
    throw DataError("schema: exactly one sensitive variable required, found " +
                    std::to_string(sensitive_count));
  }
  if (key_count < 1) throw DataError("schema: at least one key variable required");
}

int Schema::sensitive_index() const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].role == Role::sensitive) return static_cast<int>(i);
  }
  throw DataError("schema: no sensitive variable");
}

std::vector<int> Schema::key_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].role == Role::key) out.push_back(static_cast<int>(i));
  }
  return out;
}

int Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string role_name(Role role) {
  return role == Role::sensitive ? "sensitive" : "key";
}

Role parse_role(const std::string& text) {
  if (text == "key") return Role::key;
  if (text == "sensitive") return Role::sensitive;
  throw DataError("schema: unknown role '" + text + "'");
}

Schema load_schema(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("schema file " + path + ": " + e.what());
  }
  if (!doc.contains("variables") || !doc["variables"].is_array()) {
    throw DataError("schema file " + path + ": missing 'variables' array");
  }
  Schema schema;
  for (const auto& item : doc["variables"]) {
    Variable v;
    try {
      v.name = item.at("name").get<std::string>();
      v.levels = item.at("levels").get<int>();
      v.role = parse_role(item.at("role").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError("schema file " + path + ": bad variable entry: " + e.what());
    }
    schema.variables.push_back(std::move(v));
  }
  schema.validate();
  return schema;
}

void write_schema(const Schema& schema, const std::string& path) {
  nlohmann::json doc;
  doc["variables"] = nlohmann::json::array();
  for (const auto& v : schema.variables) {
    doc["variables"].push_back({{"name", v.name},
                                {"levels", v.levels},
                                {"role", role_name(v.role)}});
  }
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace synthcat
