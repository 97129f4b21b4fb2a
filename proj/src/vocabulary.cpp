#include "vocabulary.hpp"

#include <algorithm>
#include <fstream>

#include "errors.hpp"
#include "text.hpp"

namespace rulekit {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Vocabulary Vocabulary::build(const std::vector<std::string>& corpus,
                             const VocabularyParams& params) {
  if (corpus.empty()) {
    throw DataError("cannot build a vocabulary from an empty corpus");
  }
  if (params.min_df < 1) {
    throw ConfigError("min_df must be at least 1");
  }
  if (params.ngram_min < 1 || params.ngram_max > 3 || params.ngram_min > params.ngram_max) {
    throw ConfigError("ngram range must satisfy 1 <= min <= max <= 3");
  }

  // Document frequency: number of documents containing the gram at least
  // once, so each document contributes each distinct gram once.
  std::unordered_map<std::string, std::uint32_t> df;
  std::vector<std::string> grams;
  for (const std::string& doc : corpus) {
    grams.clear();
    append_ngrams(tokenize(doc), params.ngram_min, params.ngram_max, grams);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (std::string& gram : grams) {
      ++df[std::move(gram)];
    }
  }

  Vocabulary vocab;
  vocab.corpus_size_ = static_cast<std::uint32_t>(corpus.size());
  vocab.params_ = params;
  for (auto& [gram, count] : df) {
    if (count >= params.min_df) {
      vocab.features_.push_back(Feature{gram, count});
    }
  }
  if (vocab.features_.empty()) {
    throw EmptyVocabularyError("no gram reaches the min_df threshold of " +
                               std::to_string(params.min_df));
  }
  std::sort(vocab.features_.begin(), vocab.features_.end(), [](const Feature& a, const Feature& b) {
    if (a.document_frequency != b.document_frequency) {
      return a.document_frequency > b.document_frequency;
    }
    return a.gram < b.gram;
  });
  vocab.rebuild_index();
  vocab.compute_fingerprint();
  return vocab;
}

Vocabulary Vocabulary::from_parts(std::vector<Feature> features, std::uint32_t corpus_size,
                                  const VocabularyParams& params) {
  Vocabulary vocab;
  vocab.features_ = std::move(features);
  vocab.corpus_size_ = corpus_size;
  vocab.params_ = params;
  vocab.rebuild_index();
  vocab.compute_fingerprint();
  return vocab;
}

void Vocabulary::rebuild_index() {
  rank_index_.clear();
  rank_index_.reserve(features_.size());
  for (std::uint32_t rank = 0; rank < features_.size(); ++rank) {
    rank_index_.emplace(features_[rank].gram, rank);
  }
}

void Vocabulary::compute_fingerprint() {
  std::uint64_t h = fnv1a64("rulekit-vocabulary");
  const auto mix_u32 = [&h](std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    h = fnv1a64(std::string_view(bytes, 4), h);
  };
  mix_u32(corpus_size_);
  mix_u32(params_.min_df);
  mix_u32(static_cast<std::uint32_t>(params_.ngram_min));
  mix_u32(static_cast<std::uint32_t>(params_.ngram_max));
  for (const Feature& f : features_) {
    h = fnv1a64(f.gram, h);
    mix_u32(f.document_frequency);
  }
  fingerprint_ = h;
}

std::optional<std::uint32_t> Vocabulary::rank_of(std::string_view gram) const {
  auto it = rank_index_.find(gram);
  if (it == rank_index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void Vocabulary::write_tsv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  for (std::uint32_t rank = 0; rank < features_.size(); ++rank) {
    out << rank << '\t' << features_[rank].gram << '\t' << features_[rank].document_frequency
        << '\n';
  }
  if (!out) {
    throw DataError("failed writing vocabulary to " + path.string());
  }
}

}  // namespace rulekit
