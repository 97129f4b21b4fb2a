#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iterative.hpp"
#include "rule.hpp"

namespace rulekit {

struct SplitSpec {
  double test_fraction = 0.2;
  double validation_fraction_of_train = 0.15;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct SplitResult {
  Dataset train;
  Dataset validation;
  Dataset test;
};

// Deterministic seeded split into disjoint, exhaustive train/validation/test
// views. Stratified by label with per-label proportions within one example
// of the requested fractions. Throws InsufficientDataError when a label has
// fewer than 10 examples in stratified mode.
SplitResult split(const Dataset& data, const SplitSpec& spec);

struct ThresholdRow {
  double threshold = 0.0;
  std::uint64_t predicted = 0;
  std::uint64_t correct = 0;
  std::uint64_t abstained = 0;
  double precision = 0.0;  // correct / predicted, 0 when nothing predicted
};

struct EvaluationReport {
  std::vector<ThresholdRow> rows;
  // Accuracy over the whole test set with every rule active (threshold 0),
  // abstentions counting as errors.
  double overall_accuracy = 0.0;
  std::uint64_t total_examples = 0;
  std::optional<std::uint64_t> peak_memory_bytes;
  double wall_seconds = 0.0;
};

// Full-match prediction sweep: one row per threshold, counting predictions
// made, correct predictions and abstentions.
EvaluationReport evaluate(const RuleSet& ruleset, const Dataset& test,
                          std::span<const double> thresholds);

struct RunOutcome {
  RuleSet ruleset;
  EvaluationReport report;
  std::vector<RuleTrace> traces;  // iterative leg only
};

struct ComparisonSetup {
  SplitSpec split;
  LearnerOptions learner;
  IterationConfig iteration;
  std::vector<double> thresholds = {0.0, 0.6, 0.7, 0.8, 0.9};
  std::uint64_t seed = 0;
  bool measure_memory = false;
  bool parallel_labels = true;
};

struct ComparisonRecord {
  RunOutcome baseline;
  RunOutcome iterative;
};

// Baseline-versus-iterative comparison on one dataset. The baseline leg
// trains the plain learner on the full training portion (validation
// included, full dictionary); the iterative leg carves out the validation
// split and runs the confidence-gated loop. Both evaluate on the same test
// split. With measure_memory set, each leg runs in a forked child so the
// two peak-RSS watermarks cannot pollute each other; peaks are absent where
// the platform cannot provide them.
ComparisonRecord compare_runs(const Dataset& data, const ComparisonSetup& setup);

}  // namespace rulekit
