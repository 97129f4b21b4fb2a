#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"
#include "rng.hpp"

namespace rulekit {

namespace {

void validate_spec(const SyntheticSpec& spec) {
  if (spec.vocabulary_size < 1) {
    throw InvalidSpecError("vocabulary_size must be at least 1");
  }
  if (spec.document_count < 1) {
    throw InvalidSpecError("document_count must be at least 1");
  }
  if (spec.doc_length_min < 1 || spec.doc_length_min > spec.doc_length_max) {
    throw InvalidSpecError("doc length range must satisfy 1 <= min <= max");
  }
  if (!(spec.label_noise_rate >= 0.0 && spec.label_noise_rate < 0.5)) {
    throw InvalidSpecError("label_noise_rate must lie in [0, 0.5)");
  }
  if (!(spec.zipf_exponent > 0.0)) {
    throw InvalidSpecError("zipf_exponent must be positive");
  }
  std::set<std::string> keywords;
  for (const PlantedRule& rule : spec.planted_rules) {
    if (rule.label.empty()) {
      throw InvalidSpecError("planted rules need a label");
    }
    if (rule.all_of.empty()) {
      throw InvalidSpecError("planted rules need at least one required keyword");
    }
    for (const std::string& k : rule.all_of) keywords.insert(k);
    for (const std::string& k : rule.none_of) keywords.insert(k);
  }
  for (const std::string& k : keywords) {
    // Background words are named w<digits>; keywords must not collide.
    const bool background_shaped =
        k.size() >= 2 && k[0] == 'w' &&
        std::all_of(k.begin() + 1, k.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (k.empty() || background_shaped) {
      throw InvalidSpecError("keyword \"" + k + "\" collides with the background word namespace");
    }
  }
  for (const auto& [keyword, prob] : spec.keyword_presence) {
    if (!(prob > 0.0 && prob < 1.0)) {
      throw InvalidSpecError("presence probability for \"" + keyword +
                             "\" must lie in (0, 1)");
    }
    if (keywords.find(keyword) == keywords.end()) {
      throw InvalidSpecError("presence probability given for unknown keyword \"" + keyword + "\"");
    }
  }
}

std::string background_word(std::uint32_t index) {
  std::string digits = std::to_string(index);
  while (digits.size() < 5) {
    digits.insert(digits.begin(), '0');
  }
  return "w" + digits;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  validate_spec(spec);
  Rng rng(spec.seed);

  // Cumulative Zipf weights over the background vocabulary; a word is drawn
  // by binary-searching a uniform deviate.
  std::vector<double> cumulative(spec.vocabulary_size);
  {
    double total = 0.0;
    for (std::uint32_t r = 0; r < spec.vocabulary_size; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
      cumulative[r] = total;
    }
    for (double& c : cumulative) {
      c /= total;
    }
  }
  const auto draw_word = [&]() {
    const double u = rng.unit();
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<std::uint32_t>(it - cumulative.begin());
  };

  // Keywords in sorted order so the random stream is consumed in a fixed
  // sequence regardless of how the spec was assembled.
  std::set<std::string> keyword_set;
  for (const PlantedRule& rule : spec.planted_rules) {
    for (const std::string& k : rule.all_of) keyword_set.insert(k);
    for (const std::string& k : rule.none_of) keyword_set.insert(k);
  }
  std::vector<std::string> keywords(keyword_set.begin(), keyword_set.end());
  std::vector<double> presence;
  presence.reserve(keywords.size());
  for (const std::string& k : keywords) {
    auto it = spec.keyword_presence.find(k);
    presence.push_back(it == spec.keyword_presence.end() ? 0.3 : it->second);
  }

  std::vector<std::string> label_set;
  for (const PlantedRule& rule : spec.planted_rules) {
    if (std::find(label_set.begin(), label_set.end(), rule.label) == label_set.end()) {
      label_set.push_back(rule.label);
    }
  }
  if (std::find(label_set.begin(), label_set.end(), spec.default_label) == label_set.end()) {
    label_set.push_back(spec.default_label);
  }

  SyntheticCorpus corpus;
  corpus.ground_truth = spec.planted_rules;
  corpus.label_set = label_set;
  corpus.documents.reserve(spec.document_count);
  corpus.labels.reserve(spec.document_count);

  std::vector<bool> has_keyword(keywords.size());
  for (std::uint32_t d = 0; d < spec.document_count; ++d) {
    const std::uint32_t length =
        spec.doc_length_min +
        static_cast<std::uint32_t>(rng.below(spec.doc_length_max - spec.doc_length_min + 1));
    std::vector<std::string> tokens;
    tokens.reserve(length + keywords.size());
    for (std::uint32_t t = 0; t < length; ++t) {
      tokens.push_back(background_word(draw_word()));
    }
    for (std::size_t k = 0; k < keywords.size(); ++k) {
      has_keyword[k] = rng.unit() < presence[k];
      if (has_keyword[k]) {
        const std::size_t at = static_cast<std::size_t>(rng.below(tokens.size() + 1));
        tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), keywords[k]);
      }
    }

    const auto keyword_present = [&](const std::string& k) {
      const auto it = std::lower_bound(keywords.begin(), keywords.end(), k);
      return has_keyword[static_cast<std::size_t>(it - keywords.begin())];
    };
    std::string label = spec.default_label;
    for (const PlantedRule& rule : spec.planted_rules) {
      bool fires = true;
      for (const std::string& k : rule.all_of) {
        fires = fires && keyword_present(k);
      }
      for (const std::string& k : rule.none_of) {
        fires = fires && !keyword_present(k);
      }
      if (fires) {
        label = rule.label;
        break;
      }
    }
    if (spec.label_noise_rate > 0.0 && rng.unit() < spec.label_noise_rate) {
      // Flip to a uniformly chosen different label.
      std::vector<std::string> others;
      for (const std::string& l : label_set) {
        if (l != label) {
          others.push_back(l);
        }
      }
      if (!others.empty()) {
        label = others[static_cast<std::size_t>(rng.below(others.size()))];
      }
    }

    std::string text;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (t > 0) {
        text.push_back(' ');
      }
      text += tokens[t];
    }
    corpus.documents.push_back(std::move(text));
    corpus.labels.push_back(std::move(label));
  }
  return corpus;
}

}  // namespace rulekit
