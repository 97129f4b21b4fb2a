#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rulekit {

// Splits raw text into lowercase tokens. Any byte outside [0-9a-zA-Z] acts
// as a separator and empty fragments are dropped; there is no stemming and
// no stopword removal. Deterministic by construction.
std::vector<std::string> tokenize(std::string_view text);

// Appends all n-grams of `tokens` for n in [min_n, max_n] to `out`. Grams
// are the tokens joined with a single space.
void append_ngrams(const std::vector<std::string>& tokens, int min_n, int max_n,
                   std::vector<std::string>& out);

}  // namespace rulekit
