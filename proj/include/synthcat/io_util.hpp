#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace synthcat {

// Shortest round-trip decimal text for a double; NaN renders as "NaN".
// Used for every numeric field written to disk so outputs are byte-stable.
std::string format_double(double v);

std::string format_int(long long v);

std::vector<std::string> split(const std::string& line, char delim);

std::string read_text_file(const std::string& path);  // throws DataError
void write_text_file(const std::string& path, const std::string& content);

void ensure_directory(const std::string& path);

}  // namespace synthcat
