#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rulekit {

// A planted concept: conjunction over keyword presence/absence.
struct PlantedRule {
  std::string label;
  std::vector<std::string> all_of;   // keywords that must occur
  std::vector<std::string> none_of;  // keywords that must not occur
};

struct SyntheticSpec {
  std::uint32_t vocabulary_size = 500;  // background word universe
  std::uint32_t document_count = 1000;
  std::uint32_t doc_length_min = 8;
  std::uint32_t doc_length_max = 25;
  double zipf_exponent = 1.1;  // background word frequencies
  std::vector<PlantedRule> planted_rules;
  // Per-document presence probability of each planted keyword; keywords not
  // listed default to 0.3. Shaping these probabilities shapes the keyword's
  // document frequency and therefore its vocabulary rank.
  std::map<std::string, double> keyword_presence;
  std::string default_label = "none";
  double label_noise_rate = 0.0;  // in [0, 0.5)
  std::uint64_t seed = 0;
};

struct SyntheticCorpus {
  std::vector<std::string> documents;
  std::vector<std::string> labels;
  std::vector<PlantedRule> ground_truth;  // the planted rules, in match order
  std::vector<std::string> label_set;     // planted labels plus the default
};

// Samples keyword-bag documents from a Zipf-like background distribution,
// injects planted keywords independently per document, assigns the label of
// the first matching planted rule (default label when none matches) and
// finally flips each label with probability label_noise_rate. Deterministic
// for a fixed spec. Throws InvalidSpecError on out-of-range parameters.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

}  // namespace rulekit
