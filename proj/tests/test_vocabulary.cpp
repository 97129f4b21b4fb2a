#include <doctest.h>

#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "test_helpers.hpp"
#include "vocabulary.hpp"

using namespace rulekit;

TEST_CASE("equal document frequencies break ties lexicographically") {
  const std::vector<std::string> corpus(6, "alpha beta");
  const Vocabulary vocab = Vocabulary::build(corpus, {5, 1, 3});
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.feature(0).gram == "alpha");
  CHECK(vocab.feature(1).gram == "alpha beta");
  CHECK(vocab.feature(2).gram == "beta");
  for (const Feature& f : vocab.features()) {
    CHECK(f.document_frequency == 6);
  }
}

TEST_CASE("grams below min_df are excluded") {
  std::vector<std::string> corpus;
  for (int i = 0; i < 100; ++i) {
    corpus.push_back("the");
  }
  for (int i = 0; i < 4; ++i) {
    corpus.push_back("rare");
  }
  const Vocabulary vocab = Vocabulary::build(corpus, {5, 1, 3});
  CHECK(vocab.rank_of("the") == 0);
  CHECK_FALSE(vocab.rank_of("rare").has_value());
}

TEST_CASE("a min_df filter that removes everything is an error") {
  CHECK_THROWS_AS(Vocabulary::build({"one two", "three four"}, {5, 1, 3}), EmptyVocabularyError);
  CHECK_THROWS_AS(Vocabulary::build({}, {1, 1, 3}), DataError);
}

TEST_CASE("zipf corpus ranks match a brute-force document-frequency sort") {
  // 1000 documents over a word distribution with strongly skewed
  // frequencies; checks df counting and the full ordering contract.
  Rng rng(20240811);
  std::vector<std::string> corpus;
  for (int d = 0; d < 1000; ++d) {
    std::string doc;
    const int len = 5 + static_cast<int>(rng.below(15));
    for (int t = 0; t < len; ++t) {
      // Squared uniform pushes mass toward low word ids.
      const double u = rng.unit();
      const int word = static_cast<int>(u * u * 120.0);
      if (t > 0) doc += ' ';
      doc += "word" + std::to_string(word);
    }
    corpus.push_back(doc);
  }
  const Vocabulary vocab = Vocabulary::build(corpus, {5, 1, 3});

  const auto df = oracles::naive_document_frequencies(corpus, 1, 3);
  std::vector<std::pair<std::string, std::uint32_t>> expected;
  for (const auto& [gram, count] : df) {
    if (count >= 5) {
      expected.emplace_back(gram, count);
    }
  }
  std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  REQUIRE(vocab.size() == expected.size());
  for (std::uint32_t rank = 0; rank < expected.size(); ++rank) {
    CHECK(vocab.feature(rank).gram == expected[rank].first);
    CHECK(vocab.feature(rank).document_frequency == expected[rank].second);
  }
}

TEST_CASE("document frequency is non-increasing along ranks") {
  Rng rng(7);
  std::vector<std::string> corpus;
  for (int d = 0; d < 200; ++d) {
    std::string doc;
    for (int t = 0; t < 12; ++t) {
      doc += "w" + std::to_string(rng.below(40));
      doc += ' ';
    }
    corpus.push_back(doc);
  }
  const Vocabulary vocab = Vocabulary::build(corpus, {2, 1, 2});
  for (std::uint32_t r = 1; r < vocab.size(); ++r) {
    CHECK(vocab.feature(r - 1).document_frequency >= vocab.feature(r).document_frequency);
  }
}

TEST_CASE("rebuilding from the same corpus is bit-identical") {
  const std::vector<std::string> corpus = {"alpha beta gamma", "beta gamma", "alpha alpha beta",
                                           "gamma beta alpha", "beta", "alpha beta"};
  const Vocabulary a = Vocabulary::build(corpus, {2, 1, 3});
  const Vocabulary b = Vocabulary::build(corpus, {2, 1, 3});
  REQUIRE(a.size() == b.size());
  for (std::uint32_t r = 0; r < a.size(); ++r) {
    CHECK(a.feature(r).gram == b.feature(r).gram);
    CHECK(a.feature(r).document_frequency == b.feature(r).document_frequency);
  }
  CHECK(a.fingerprint() == b.fingerprint());
}

TEST_CASE("vocabulary dump is rank TAB gram TAB df") {
  helpers::TempDir dir("vocab_tsv");
  const std::vector<std::string> corpus(6, "alpha beta");
  const Vocabulary vocab = Vocabulary::build(corpus, {5, 1, 1});
  const auto path = dir.path() / "vocabulary.tsv";
  vocab.write_tsv(path);

  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "0\talpha\t6");
  REQUIRE(std::getline(in, line));
  CHECK(line == "1\tbeta\t6");
  CHECK_FALSE(std::getline(in, line));
}
