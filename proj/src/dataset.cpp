#include "dataset.hpp"

#include <algorithm>
#include <numeric>

#include "errors.hpp"
#include "text.hpp"

namespace rulekit {

std::shared_ptr<const DataTable> DataTable::text(std::shared_ptr<const Vocabulary> vocabulary,
                                                 std::vector<std::string> labels,
                                                 std::vector<Row> rows) {
  auto table = std::make_shared<DataTable>();
  table->mode_ = DatasetMode::Text;
  table->vocabulary_ = std::move(vocabulary);
  table->labels_ = std::move(labels);
  table->rows_ = std::move(rows);
  table->validate();
  table->compute_fingerprint();
  return table;
}

std::shared_ptr<const DataTable> DataTable::tabular(std::vector<AttributeDecl> attributes,
                                                    std::vector<std::string> labels,
                                                    std::vector<Row> rows) {
  auto table = std::make_shared<DataTable>();
  table->mode_ = DatasetMode::Tabular;
  table->attributes_ = std::move(attributes);
  table->labels_ = std::move(labels);
  table->rows_ = std::move(rows);
  table->validate();
  table->compute_fingerprint();
  return table;
}

const Vocabulary& DataTable::vocabulary() const {
  if (!vocabulary_) {
    throw DataError("dataset has no vocabulary (tabular mode)");
  }
  return *vocabulary_;
}

std::uint32_t DataTable::num_attributes() const noexcept {
  return mode_ == DatasetMode::Text ? static_cast<std::uint32_t>(vocabulary_->size())
                                    : static_cast<std::uint32_t>(attributes_.size());
}

const std::string& DataTable::attribute_name(std::uint32_t attribute) const {
  if (mode_ == DatasetMode::Text) {
    return vocabulary().feature(attribute).gram;
  }
  return attributes_.at(attribute).name;
}

void DataTable::validate() const {
  if (labels_.empty()) {
    throw DataError("dataset has an empty label set");
  }
  const std::uint32_t num_labels = static_cast<std::uint32_t>(labels_.size());
  if (mode_ == DatasetMode::Text) {
    const std::uint32_t vocab_size = static_cast<std::uint32_t>(vocabulary().size());
    for (const Row& row : rows_) {
      if (row.label >= num_labels) {
        throw DataError("row " + row.id + " has an out-of-range label id");
      }
      if (!std::is_sorted(row.ranks.begin(), row.ranks.end())) {
        throw DataError("row " + row.id + " has unsorted feature ranks");
      }
      if (!row.ranks.empty() && row.ranks.back() >= vocab_size) {
        throw DataError("row " + row.id + " references a rank beyond the vocabulary");
      }
      if (!row.values.empty()) {
        throw DataError("row " + row.id + " carries tabular values in a text dataset");
      }
    }
  } else {
    for (const Row& row : rows_) {
      if (row.label >= num_labels) {
        throw DataError("row " + row.id + " has an out-of-range label id");
      }
      if (row.values.size() != attributes_.size()) {
        throw DataError("row " + row.id + " has the wrong attribute count");
      }
      if (!row.ranks.empty()) {
        throw DataError("row " + row.id + " carries text ranks in a tabular dataset");
      }
    }
  }
}

void DataTable::compute_fingerprint() {
  std::uint64_t h = fnv1a64("rulekit-schema");
  if (mode_ == DatasetMode::Text) {
    h = fnv1a64("text", h);
    char bytes[8];
    std::uint64_t v = vocabulary().fingerprint();
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    h = fnv1a64(std::string_view(bytes, 8), h);
  } else {
    h = fnv1a64("tabular", h);
    for (const AttributeDecl& attr : attributes_) {
      h = fnv1a64(attr.name, h);
      h = fnv1a64(attr.numeric ? "num" : "nom", h);
      for (const std::string& symbol : attr.symbols) {
        h = fnv1a64(symbol, h);
      }
    }
  }
  for (const std::string& label : labels_) {
    h = fnv1a64(label, h);
    h = fnv1a64("\x1f", h);
  }
  fingerprint_ = h;
}

Dataset::Dataset(std::shared_ptr<const DataTable> table) : table_(std::move(table)) {
  rows_.resize(table_->num_rows());
  std::iota(rows_.begin(), rows_.end(), 0u);
  feature_limit_ = table_->num_attributes();
}

Dataset::Dataset(std::shared_ptr<const DataTable> table, std::vector<std::uint32_t> rows)
    : table_(std::move(table)), rows_(std::move(rows)) {
  feature_limit_ = table_->num_attributes();
}

Dataset Dataset::vectorize(const std::vector<std::string>& corpus,
                           const std::vector<std::string>& labels,
                           std::shared_ptr<const Vocabulary> vocabulary) {
  if (corpus.size() != labels.size()) {
    throw DataError("corpus and label list sizes differ");
  }
  std::vector<std::string> label_set(labels.begin(), labels.end());
  std::sort(label_set.begin(), label_set.end());
  label_set.erase(std::unique(label_set.begin(), label_set.end()), label_set.end());

  const VocabularyParams& params = vocabulary->params();
  std::vector<Row> rows;
  rows.reserve(corpus.size());
  std::vector<std::string> grams;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    Row row;
    row.id = "doc" + std::to_string(i);
    row.label = static_cast<std::uint32_t>(
        std::lower_bound(label_set.begin(), label_set.end(), labels[i]) - label_set.begin());
    grams.clear();
    append_ngrams(tokenize(corpus[i]), params.ngram_min, params.ngram_max, grams);
    for (const std::string& gram : grams) {
      if (auto rank = vocabulary->rank_of(gram)) {
        row.ranks.push_back(*rank);
      }
    }
    std::sort(row.ranks.begin(), row.ranks.end());
    row.ranks.erase(std::unique(row.ranks.begin(), row.ranks.end()), row.ranks.end());
    rows.push_back(std::move(row));
  }
  return Dataset(DataTable::text(std::move(vocabulary), std::move(label_set), std::move(rows)));
}

bool Dataset::has_feature(std::uint32_t i, std::uint32_t rank) const {
  if (rank >= feature_limit_) {
    return false;
  }
  const std::vector<std::uint32_t>& ranks = row(i).ranks;
  return std::binary_search(ranks.begin(), ranks.end(), rank);
}

Dataset Dataset::restrict(std::uint32_t k) const {
  if (mode() != DatasetMode::Text) {
    throw InvalidRestrictionError("dictionary restriction applies to text datasets only");
  }
  const std::uint32_t vocab_size = static_cast<std::uint32_t>(table_->vocabulary().size());
  if (k < 1 || k > vocab_size) {
    throw InvalidRestrictionError("dictionary size " + std::to_string(k) +
                                  " outside [1, " + std::to_string(vocab_size) + "]");
  }
  Dataset restricted(*this);
  // Restriction composes as a minimum, so re-restricting an already
  // restricted view cannot widen it.
  restricted.feature_limit_ = std::min(feature_limit_, k);
  return restricted;
}

Dataset Dataset::select(std::vector<std::uint32_t> view_indices) const {
  Dataset out(*this);
  std::vector<std::uint32_t> selected;
  selected.reserve(view_indices.size());
  for (std::uint32_t i : view_indices) {
    selected.push_back(rows_.at(i));
  }
  out.rows_ = std::move(selected);
  return out;
}

void Dataset::remove_rows(const std::vector<std::uint32_t>& view_indices) {
  std::vector<bool> drop(rows_.size(), false);
  for (std::uint32_t i : view_indices) {
    drop.at(i) = true;
  }
  std::vector<std::uint32_t> kept;
  kept.reserve(rows_.size() - view_indices.size());
  for (std::uint32_t i = 0; i < rows_.size(); ++i) {
    if (!drop[i]) {
      kept.push_back(rows_[i]);
    }
  }
  rows_ = std::move(kept);
}

void Dataset::append_table_rows(const std::vector<std::uint32_t>& table_row_ids) {
  rows_.insert(rows_.end(), table_row_ids.begin(), table_row_ids.end());
}

std::vector<std::uint32_t> Dataset::rows_with_label(std::uint32_t label_id) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < rows_.size(); ++i) {
    if (label(i) == label_id) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::uint32_t> Dataset::rows_without_label(std::uint32_t label_id) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < rows_.size(); ++i) {
    if (label(i) != label_id) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> Dataset::label_counts() const {
  std::vector<std::size_t> counts(table_->labels().size(), 0);
  for (std::uint32_t i = 0; i < rows_.size(); ++i) {
    ++counts[label(i)];
  }
  return counts;
}

}  // namespace rulekit
