#include "loader.hpp"

#include <algorithm>
#include <charconv>

#include "csv.hpp"
#include "errors.hpp"

namespace rulekit {

TextCorpus load_text_csv(const std::filesystem::path& path, const TextColumns& columns,
                         char delimiter) {
  const CsvTable table = read_csv(path, delimiter);
  const std::size_t text_col = table.column(columns.text_column);
  const std::size_t label_col = table.column(columns.label_column);
  TextCorpus corpus;
  corpus.documents.reserve(table.rows.size());
  corpus.labels.reserve(table.rows.size());
  for (const std::vector<std::string>& row : table.rows) {
    corpus.documents.push_back(row[text_col]);
    corpus.labels.push_back(row[label_col]);
  }
  if (corpus.documents.empty()) {
    throw DataError(path.string() + " contains no data rows");
  }
  return corpus;
}

namespace {

bool parses_as_number(const std::string& field, double& value) {
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  if (begin == end) {
    return false;
  }
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Dataset load_tabular_csv(const std::filesystem::path& path, const std::string& label_column,
                         char delimiter) {
  const CsvTable table = read_csv(path, delimiter);
  const std::size_t label_col = table.column(label_column);
  if (table.rows.empty()) {
    throw DataError(path.string() + " contains no data rows");
  }
  if (table.header.size() < 2) {
    throw DataError(path.string() + " needs at least one attribute column besides the label");
  }

  std::vector<std::size_t> attr_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != label_col) {
      attr_cols.push_back(c);
    }
  }

  std::vector<AttributeDecl> attributes(attr_cols.size());
  for (std::size_t a = 0; a < attr_cols.size(); ++a) {
    const std::size_t c = attr_cols[a];
    attributes[a].name = table.header[c];
    attributes[a].numeric = true;
    double ignored;
    for (const std::vector<std::string>& row : table.rows) {
      if (!parses_as_number(row[c], ignored)) {
        attributes[a].numeric = false;
        break;
      }
    }
    if (!attributes[a].numeric) {
      std::vector<std::string> symbols;
      for (const std::vector<std::string>& row : table.rows) {
        symbols.push_back(row[c]);
      }
      std::sort(symbols.begin(), symbols.end());
      symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
      attributes[a].symbols = std::move(symbols);
    }
  }

  std::vector<std::string> labels;
  for (const std::vector<std::string>& row : table.rows) {
    labels.push_back(row[label_col]);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::vector<Row> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Row row;
    row.id = "row" + std::to_string(r);
    row.label = static_cast<std::uint32_t>(
        std::lower_bound(labels.begin(), labels.end(), table.rows[r][label_col]) - labels.begin());
    row.values.resize(attr_cols.size());
    for (std::size_t a = 0; a < attr_cols.size(); ++a) {
      const std::string& field = table.rows[r][attr_cols[a]];
      if (attributes[a].numeric) {
        double value = 0.0;
        if (!parses_as_number(field, value)) {
          throw DataError("row " + std::to_string(r + 2) + ", column \"" + attributes[a].name +
                          "\": expected a number");
        }
        row.values[a] = value;
      } else {
        const auto& symbols = attributes[a].symbols;
        row.values[a] = static_cast<double>(
            std::lower_bound(symbols.begin(), symbols.end(), field) - symbols.begin());
      }
    }
    rows.push_back(std::move(row));
  }

  return Dataset(DataTable::tabular(std::move(attributes), std::move(labels), std::move(rows)));
}

}  // namespace rulekit
