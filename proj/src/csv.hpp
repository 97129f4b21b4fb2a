#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rulekit {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws DataError when absent
};

// RFC-4180-style reader: header row required, quoted fields with doubled
// quotes, delimiters and newlines allowed inside quotes, CRLF tolerated.
CsvTable read_csv(const std::filesystem::path& path, char delimiter = ',');
CsvTable parse_csv(const std::string& content, char delimiter = ',');

void write_csv(const std::filesystem::path& path, const CsvTable& table, char delimiter = ',');

}  // namespace rulekit
