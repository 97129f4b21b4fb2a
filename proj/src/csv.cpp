#include "csv.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace rulekit {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  throw DataError("CSV has no column named \"" + name + "\"");
}

CsvTable parse_csv(const std::string& content, char delimiter) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool any_field = false;
  std::size_t line = 1;

  const auto end_field = [&]() {
    record.push_back(std::move(field));
    field.clear();
    any_field = true;
  };
  const auto end_record = [&]() {
    if (!any_field && record.empty()) {
      return;  // blank line
    }
    end_field();
    if (table.header.empty()) {
      table.header = std::move(record);
    } else {
      if (record.size() != table.header.size()) {
        throw DataError("CSV line " + std::to_string(line) + " has " +
                        std::to_string(record.size()) + " fields, header has " +
                        std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(record));
    }
    record.clear();
    any_field = false;
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
        }
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      any_field = true;  // a quoted empty field still counts
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
      ++line;
    } else if (c == '\r') {
      // swallowed; CRLF handled by the following '\n'
    } else {
      field.push_back(c);
      any_field = true;
    }
  }
  if (in_quotes) {
    throw DataError("CSV ends inside a quoted field (line " + std::to_string(line) + ")");
  }
  if (any_field || !record.empty()) {
    end_record();
  }
  if (table.header.empty()) {
    throw DataError("CSV has no header row");
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open CSV file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), delimiter);
}

namespace {

void write_field(std::ostream& out, const std::string& field, char delimiter) {
  const bool needs_quotes = field.find_first_of({delimiter, '"', '\n', '\r'}) != std::string::npos;
  if (!needs_quotes) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') {
      out << "\"\"";
    } else {
      out << c;
    }
  }
  out << '"';
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  const auto write_record = [&](const std::vector<std::string>& record) {
    for (std::size_t i = 0; i < record.size(); ++i) {
      if (i > 0) {
        out << delimiter;
      }
      write_field(out, record[i], delimiter);
    }
    out << '\n';
  };
  write_record(table.header);
  for (const std::vector<std::string>& row : table.rows) {
    write_record(row);
  }
  if (!out) {
    throw DataError("failed writing CSV to " + path.string());
  }
}

}  // namespace rulekit
