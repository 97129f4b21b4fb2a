#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "learner.hpp"
#include "rule.hpp"

namespace rulekit {

struct IterationConfig {
  std::uint32_t max_iterations = 5;
  double voc_threshold = 0.9;
  double initial_dictionary_fraction = 1.0 / 8.0;
  std::uint32_t expansion_factor = 2;
  std::uint32_t patience = 3;  // consecutive below-threshold rules before stopping
  std::uint32_t max_rules_per_label = 10;
};

void validate_iteration_config(const IterationConfig& config);

enum class IterationDecision : std::uint8_t {
  Accepted = 0,  // confidence cleared the threshold
  Expanded = 1,  // rejected; dictionary doubled and false positives injected
  Fallback = 2,  // last iteration's rule kept regardless of its confidence
};

struct IterationRecord {
  std::uint32_t iteration = 0;        // 1-based
  std::uint32_t dictionary_size = 0;  // size used to learn this iteration's rule
  Rule rule;
  double voc = 0.0;
  IterationDecision decision = IterationDecision::Expanded;
};

struct RuleTrace {
  std::uint32_t label = 0;
  std::uint32_t rule_index = 0;  // position within the label's rule sequence
  std::vector<IterationRecord> records;
};

// Confidence of a rule on held-out validation data: p / (p + n) over the
// covered validation examples. A rule covering nothing scores 0 - a rule
// with no validation evidence must not pass the gate.
double value_of_confidence(const Rule& rule, const Dataset& validation,
                           std::uint32_t target_label);

// One confidence-gated rule. Starting from a dictionary of
// ceil(initial_dictionary_fraction * V) grams, learns a rule on the
// restricted training pool and scores it on the equally restricted
// validation pool. A rule above the threshold is returned as accepted;
// otherwise the rule's validation false positives are added to the
// training pool (each row at most once; validation itself stays intact so
// confidence stays comparable across iterations), the dictionary doubles
// (capped at V) and the loop continues. When max_iterations are exhausted
// the final rule is returned with accepted = false. Tabular pools skip
// restriction and use the full attribute set in every iteration. Mutates
// `train` (the injections persist); propagates NoRuleFoundError from the
// learner. `trace` receives one record per iteration.
ScoredRule learn_confident_rule(Dataset& train, Dataset& validation, std::uint32_t target_label,
                                const IterationConfig& config, const LearnerOptions& learner,
                                std::uint64_t seed, RuleTrace& trace);

struct IterativeLabelResult {
  std::vector<ScoredRule> rules;
  std::vector<RuleTrace> traces;
};

// Sequential covering around learn_confident_rule: after each returned rule
// the covered target-label examples leave the training pool, and the
// dictionary size resets to the initial fraction for the next rule. Stops
// at max_rules_per_label, when the target-label pool is exhausted, after
// `patience` consecutive fallback rules, or when no further rule can be
// learned.
IterativeLabelResult learn_ruleset_iterative(Dataset train, Dataset validation,
                                             std::uint32_t target_label,
                                             const IterationConfig& config,
                                             const LearnerOptions& learner, std::uint64_t seed);

struct MulticlassResult {
  RuleSet ruleset;
  std::vector<RuleTrace> traces;
};

// One-vs-rest over every label in the dataset's label set; per-label runs
// are independent and execute concurrently. The per-label rule lists are
// concatenated in label order and ordered by descending confidence.
MulticlassResult learn_multiclass(const Dataset& train, const Dataset& validation,
                                  const IterationConfig& config, const LearnerOptions& learner,
                                  std::uint64_t seed, bool parallel = true);

// Baseline counterpart: plain sequential covering per label on the full
// training data with the full dictionary; rule confidence is training
// precision.
RuleSet learn_multiclass_baseline(const Dataset& train, const LearnerOptions& learner,
                                  std::uint64_t seed, bool parallel = true);

// Structured text export of iteration traces; names resolve against the
// schema so intermediate rules render too.
std::string format_traces(const std::vector<RuleTrace>& traces, const DataTable& table,
                          const std::string& target_name);

}  // namespace rulekit
