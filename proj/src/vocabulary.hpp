#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rulekit {

struct Feature {
  std::string gram;
  std::uint32_t document_frequency = 0;
};

struct VocabularyParams {
  std::uint32_t min_df = 5;
  int ngram_min = 1;
  int ngram_max = 3;
};

// The ordered feature list (the "dictionary"). Features are all n-grams of
// the corpus whose document frequency is at least min_df, ordered by
// non-increasing document frequency with lexicographic tie-breaks, i.e. by
// non-decreasing inverse document frequency. The ordering only depends on
// document frequency, so IDF values are never materialized. Immutable after
// construction.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Throws EmptyVocabularyError when no gram reaches min_df, ConfigError on
  // bad parameters.
  static Vocabulary build(const std::vector<std::string>& corpus, const VocabularyParams& params);

  // Assembles a vocabulary from an already-ordered feature list (cache
  // loading, programmatic construction). The caller vouches for the
  // ordering invariant.
  static Vocabulary from_parts(std::vector<Feature> features, std::uint32_t corpus_size,
                               const VocabularyParams& params);

  std::size_t size() const noexcept { return features_.size(); }
  const Feature& feature(std::uint32_t rank) const { return features_.at(rank); }
  const std::vector<Feature>& features() const noexcept { return features_; }

  std::optional<std::uint32_t> rank_of(std::string_view gram) const;

  std::uint32_t corpus_size() const noexcept { return corpus_size_; }
  const VocabularyParams& params() const noexcept { return params_; }

  // Stable 64-bit identity of the feature list; rule sets built against this
  // vocabulary embed it so stale artifacts are rejected.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  // Line-oriented export: `rank<TAB>gram<TAB>df`, one feature per line in
  // rank order.
  void write_tsv(const std::filesystem::path& path) const;

 private:
  std::vector<Feature> features_;
  std::unordered_map<std::string_view, std::uint32_t> rank_index_;  // views into features_
  std::uint32_t corpus_size_ = 0;
  VocabularyParams params_;
  std::uint64_t fingerprint_ = 0;

  void rebuild_index();
  void compute_fingerprint();
};

// FNV-1a 64-bit, the hash behind every schema fingerprint in rulekit.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace rulekit
