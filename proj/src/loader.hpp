#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace rulekit {

struct TextColumns {
  std::string text_column = "text";
  std::string label_column = "label";
};

struct TextCorpus {
  std::vector<std::string> documents;
  std::vector<std::string> labels;
};

// Pulls the designated text and label columns out of a UTF-8 CSV.
TextCorpus load_text_csv(const std::filesystem::path& path, const TextColumns& columns,
                         char delimiter = ',');

// Builds a tabular dataset from a CSV: every non-label column becomes an
// attribute, numeric when all of its values parse as numbers, nominal
// otherwise (symbols sorted for stable ids).
Dataset load_tabular_csv(const std::filesystem::path& path, const std::string& label_column,
                         char delimiter = ',');

}  // namespace rulekit
