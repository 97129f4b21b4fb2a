#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dataset.hpp"
#include "evaluation.hpp"
#include "iterative.hpp"
#include "learner.hpp"
#include "synthetic.hpp"

namespace rulekit {

struct DatasetConfig {
  std::string path;
  DatasetMode mode = DatasetMode::Text;
  std::string text_column = "text";
  std::string label_column = "label";
  char delimiter = ',';
};

struct PipelineConfig {
  VocabularyParams vocabulary;
};

struct EvaluationConfig {
  std::vector<double> thresholds = {0.0, 0.6, 0.7, 0.8, 0.9};
  double test_fraction = 0.2;
  double validation_fraction = 0.15;
  std::uint64_t seed = 0;
};

struct OutputConfig {
  std::string directory = "out";
};

// One experiment definition. Loaded from a JSON file with unknown keys
// rejected outright, so a typo cannot silently fall back to a default.
struct RunConfig {
  DatasetConfig dataset;
  PipelineConfig pipeline;
  LearnerOptions learner;
  IterationConfig iteration;
  EvaluationConfig evaluation;
  OutputConfig output;

  // Throws ConfigError on unknown keys, out-of-range values, or a dataset
  // path that does not exist.
  static RunConfig load(const std::filesystem::path& path);
  static RunConfig parse(const std::string& text, const std::filesystem::path& base_dir);

  // Canonical echo of the effective configuration; embedded in reports so
  // every result is self-describing.
  nlohmann::ordered_json echo() const;
};

// Synthetic-corpus spec file (JSON, same strictness).
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

}  // namespace rulekit
