#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rule.hpp"

namespace rulekit {

enum class LearnerKindId : std::uint8_t {
  Foil = 0,
  Ripper = 1,
};

struct LearnerOptions {
  LearnerKindId kind = LearnerKindId::Foil;
  std::uint32_t max_conditions = 16;
  double grow_fraction = 2.0 / 3.0;  // grow/prune split ratio for ripper
  double mdl_slack_bits = 64.0;      // description-length stopping budget
  std::uint32_t max_rules_per_label = 10;
};

void validate_options(const LearnerOptions& options);

// Information gain of a candidate literal: coverage moves from (p0, n0) to
// (p1, n1) when the literal is added.
//   gain = p1 * (log2(p1 / (p1 + n1)) - log2(p0 / (p0 + n0)))
// Returns -infinity when p1 = 0, so literals covering no positives are
// never selected. Never NaN.
double foil_gain(std::uint64_t p0, std::uint64_t n0, std::uint64_t p1, std::uint64_t n1);

struct GrowthStep {
  Condition condition;
  double gain = 0.0;
};

// Greedy rule growth: at each step every candidate literal is evaluated
// (present/absent per visible feature in text mode; equals per nominal
// symbol; <=/>= at midpoints between adjacent distinct values where the
// class changes in numeric attributes) and the one with maximal gain is
// added. Ties go to the lowest attribute, then the operator order
// present < absent < equals < le < ge, then ascending value. Growth stops
// when the rule covers no negatives, no literal has positive gain, or
// max_conditions is reached. Throws NoRuleFoundError when the very first
// step has no positive-gain literal. The returned rule has label 0; callers
// assign the target label.
Rule foil_learn_one_rule(const Dataset& data, std::span<const std::uint32_t> positives,
                         std::span<const std::uint32_t> negatives, const LearnerOptions& options,
                         std::vector<GrowthStep>* trace = nullptr);

// Same growth, run on the grow partition only.
Rule ripper_grow(const Dataset& data, std::span<const std::uint32_t> positives_grow,
                 std::span<const std::uint32_t> negatives_grow, const LearnerOptions& options,
                 std::vector<GrowthStep>* trace = nullptr);

// Keeps the prefix of the grown condition sequence (length >= 1) that
// maximizes (p - n) / (p + n) on the prune partition; ties favor the
// shorter prefix. When no prefix covers anything on the prune partition the
// full rule is returned unchanged.
Rule ripper_prune(Rule rule, const Dataset& data, std::span<const std::uint32_t> positives_prune,
                  std::span<const std::uint32_t> negatives_prune);

// Single entry point for the iterative wrapper: FOIL learns directly on the
// whole training view, RIPPER grows on a seeded stratified 2/3 split and
// prunes on the remaining 1/3.
Rule learn_one_rule(const LearnerOptions& options, const Dataset& train,
                    std::uint32_t target_label, std::uint64_t seed);

// Sequential covering with RIPPER rules and description-length stopping:
// stop when the total description length exceeds the minimum seen so far by
// more than mdl_slack_bits, when a pruned rule's error on the prune
// partition reaches 50% (the standard accept test), when positives are
// exhausted, or at max_rules_per_label. May return an empty list.
std::vector<ScoredRule> ripper_learn_ruleset(const Dataset& train, std::uint32_t target_label,
                                             const LearnerOptions& options, std::uint64_t seed);

// Sequential covering with FOIL rules; stops on NoRuleFound, exhausted
// positives, or the rule cap.
std::vector<ScoredRule> foil_learn_ruleset(const Dataset& train, std::uint32_t target_label,
                                           const LearnerOptions& options, std::uint64_t seed);

std::vector<ScoredRule> learn_ruleset_baseline(const LearnerOptions& options, const Dataset& train,
                                               std::uint32_t target_label, std::uint64_t seed);

// Description-length pieces, exposed for tests.
//
// Rule bits: 0.5 * (log2(k + 1) + ||k-subset of the condition universe||),
// the halving being the usual redundancy correction. Exception bits:
// log2(D + 1) plus the bits to identify the false positives among the
// covered examples and the false negatives among the uncovered ones.
double ripper_theory_bits(std::size_t conditions, double universe);
double ripper_exception_bits(std::uint64_t covered, std::uint64_t false_positives,
                             std::uint64_t uncovered, std::uint64_t false_negatives);
double condition_universe(const Dataset& data);

}  // namespace rulekit
