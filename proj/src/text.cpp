#include "text.hpp"

namespace rulekit {

namespace {

inline bool is_token_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline char lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_byte(c)) {
      current.push_back(lower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

void append_ngrams(const std::vector<std::string>& tokens, int min_n, int max_n,
                   std::vector<std::string>& out) {
  const int count = static_cast<int>(tokens.size());
  for (int n = min_n; n <= max_n; ++n) {
    for (int start = 0; start + n <= count; ++start) {
      std::string gram = tokens[static_cast<std::size_t>(start)];
      for (int k = 1; k < n; ++k) {
        gram.push_back(' ');
        gram.append(tokens[static_cast<std::size_t>(start + k)]);
      }
      out.push_back(std::move(gram));
    }
  }
}

}  // namespace rulekit
