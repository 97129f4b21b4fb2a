#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vocabulary.hpp"

namespace rulekit {

enum class DatasetMode : std::uint8_t {
  Text = 0,
  Tabular = 1,
};

struct AttributeDecl {
  std::string name;
  bool numeric = false;
  // Nominal value symbols, sorted; a row stores the symbol index.
  std::vector<std::string> symbols;
};

struct Row {
  std::string id;
  std::uint32_t label = 0;
  // Text mode: sorted ranks of the grams present in the document.
  std::vector<std::uint32_t> ranks;
  // Tabular mode: one slot per attribute; nominal slots hold the symbol
  // index as a double.
  std::vector<double> values;
};

// Immutable example storage plus schema. Shared by every Dataset view that
// was derived from it; never copied by restriction, splitting or pool
// bookkeeping.
class DataTable {
 public:
  static std::shared_ptr<const DataTable> text(std::shared_ptr<const Vocabulary> vocabulary,
                                               std::vector<std::string> labels,
                                               std::vector<Row> rows);
  static std::shared_ptr<const DataTable> tabular(std::vector<AttributeDecl> attributes,
                                                  std::vector<std::string> labels,
                                                  std::vector<Row> rows);

  DatasetMode mode() const noexcept { return mode_; }
  const Vocabulary& vocabulary() const;
  const std::vector<AttributeDecl>& attributes() const noexcept { return attributes_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t num_rows() const noexcept { return rows_.size(); }
  const Row& row(std::uint32_t index) const { return rows_[index]; }

  // Number of learnable attributes: vocabulary size in text mode, attribute
  // count in tabular mode.
  std::uint32_t num_attributes() const noexcept;

  std::uint64_t schema_fingerprint() const noexcept { return fingerprint_; }
  const std::string& attribute_name(std::uint32_t attribute) const;

 private:
  DatasetMode mode_ = DatasetMode::Text;
  std::shared_ptr<const Vocabulary> vocabulary_;
  std::vector<AttributeDecl> attributes_;
  std::vector<std::string> labels_;
  std::vector<Row> rows_;
  std::uint64_t fingerprint_ = 0;

  void validate() const;
  void compute_fingerprint();
};

// A logical dataset: a row selection over a shared DataTable plus, in text
// mode, the visible prefix of the feature space. Restriction and row-pool
// edits touch only this lightweight state.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::shared_ptr<const DataTable> table);
  Dataset(std::shared_ptr<const DataTable> table, std::vector<std::uint32_t> rows);

  // Binary presence vectorization of a raw corpus against a vocabulary:
  // rank r is present in example i iff the r-th gram occurs at least once in
  // document i. Multiplicities and weights are not stored.
  static Dataset vectorize(const std::vector<std::string>& corpus,
                           const std::vector<std::string>& labels,
                           std::shared_ptr<const Vocabulary> vocabulary);

  const DataTable& table() const noexcept { return *table_; }
  std::shared_ptr<const DataTable> table_ptr() const noexcept { return table_; }
  DatasetMode mode() const noexcept { return table_->mode(); }

  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }

  // View-relative row access: i in [0, size()).
  const Row& row(std::uint32_t i) const { return table_->row(rows_[i]); }
  std::uint32_t label(std::uint32_t i) const { return table_->row(rows_[i]).label; }
  std::uint32_t table_row_id(std::uint32_t i) const { return rows_[i]; }
  std::span<const std::uint32_t> row_ids() const noexcept { return rows_; }

  // Visible feature-space prefix (text mode); equals vocabulary size when
  // unrestricted.
  std::uint32_t feature_limit() const noexcept { return feature_limit_; }

  // True iff `rank` is present in view row i under the current restriction.
  bool has_feature(std::uint32_t i, std::uint32_t rank) const;

  // Prefix restriction to the first k ranks. A view over the same storage;
  // throws InvalidRestrictionError unless 1 <= k <= vocabulary size and the
  // dataset is in text mode.
  Dataset restrict(std::uint32_t k) const;

  // Derived views.
  Dataset select(std::vector<std::uint32_t> view_indices) const;
  void remove_rows(const std::vector<std::uint32_t>& view_indices);
  void append_table_rows(const std::vector<std::uint32_t>& table_row_ids);

  std::vector<std::uint32_t> rows_with_label(std::uint32_t label) const;
  std::vector<std::uint32_t> rows_without_label(std::uint32_t label) const;
  std::vector<std::size_t> label_counts() const;

 private:
  std::shared_ptr<const DataTable> table_;
  std::vector<std::uint32_t> rows_;
  std::uint32_t feature_limit_ = 0;
};

}  // namespace rulekit
