#include <doctest.h>

#include "text.hpp"

using namespace rulekit;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("Bad movie, REALLY bad!") ==
        std::vector<std::string>{"bad", "movie", "really", "bad"});
  CHECK(tokenize("it's 10/10") == std::vector<std::string>{"it", "s", "10", "10"});
}

TEST_CASE("tokenize on empty and separator-only input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize(" \t\n ,;!").empty());
}

TEST_CASE("tokenize keeps duplicates and order") {
  CHECK(tokenize("a b a") == std::vector<std::string>{"a", "b", "a"});
}

TEST_CASE("ngrams join tokens with single spaces") {
  std::vector<std::string> grams;
  append_ngrams({"a", "b", "c"}, 1, 3, grams);
  CHECK(grams == std::vector<std::string>{"a", "b", "c", "a b", "b c", "a b c"});
}

TEST_CASE("ngrams of a short token sequence") {
  std::vector<std::string> grams;
  append_ngrams({"solo"}, 1, 3, grams);
  CHECK(grams == std::vector<std::string>{"solo"});
  grams.clear();
  append_ngrams({}, 1, 3, grams);
  CHECK(grams.empty());
}
