#pragma once

#include <filesystem>

#include "dataset.hpp"

namespace rulekit {

// Versioned binary container for prepared datasets (vocabulary or tabular
// schema plus vectorized rows). Layout is little-endian and documented in
// docs/formats.md; the embedded schema fingerprint is verified on load.
class DatasetCache {
 public:
  static void write(const Dataset& data, const std::filesystem::path& path);
  static Dataset read(const std::filesystem::path& path);
};

}  // namespace rulekit
