#include "iterative.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <unordered_set>

#include "errors.hpp"
#include "rng.hpp"

namespace rulekit {

void validate_iteration_config(const IterationConfig& config) {
  if (config.max_iterations < 1) {
    throw ConfigError("max_iterations must be at least 1");
  }
  if (!(config.voc_threshold >= 0.0 && config.voc_threshold <= 1.0)) {
    throw ConfigError("voc_threshold must lie in [0, 1]");
  }
  if (!(config.initial_dictionary_fraction > 0.0 && config.initial_dictionary_fraction <= 1.0)) {
    throw ConfigError("initial_dictionary_fraction must lie in (0, 1]");
  }
  if (config.expansion_factor < 2) {
    throw ConfigError("expansion_factor must be at least 2");
  }
  if (config.patience < 1) {
    throw ConfigError("patience must be at least 1");
  }
  if (config.max_rules_per_label < 1) {
    throw ConfigError("max_rules_per_label must be at least 1");
  }
}

double value_of_confidence(const Rule& rule, const Dataset& validation,
                           std::uint32_t target_label) {
  const Coverage cov = coverage(rule, validation, target_label);
  const std::uint64_t total = cov.positives + cov.negatives;
  if (total == 0) {
    return 0.0;
  }
  return static_cast<double>(cov.positives) / static_cast<double>(total);
}

ScoredRule learn_confident_rule(Dataset& train, Dataset& validation, std::uint32_t target_label,
                                const IterationConfig& config, const LearnerOptions& learner,
                                std::uint64_t seed, RuleTrace& trace) {
  validate_iteration_config(config);
  const bool text = train.mode() == DatasetMode::Text;
  const std::uint32_t vocab_size =
      text ? static_cast<std::uint32_t>(train.table().vocabulary().size()) : 0;
  std::uint32_t dictionary_size =
      text ? std::min<std::uint32_t>(
                 vocab_size,
                 std::max<std::uint32_t>(
                     1, static_cast<std::uint32_t>(std::ceil(config.initial_dictionary_fraction *
                                                             static_cast<double>(vocab_size)))))
           : train.feature_limit();

  for (std::uint32_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
    const Dataset train_view = text ? train.restrict(dictionary_size) : train;
    const Dataset valid_view = text ? validation.restrict(dictionary_size) : validation;

    Rule rule = learn_one_rule(learner, train_view, target_label, derive_seed(seed, iteration));
    const double voc = value_of_confidence(rule, valid_view, target_label);

    IterationRecord record;
    record.iteration = iteration;
    record.dictionary_size = dictionary_size;
    record.rule = rule;
    record.voc = voc;

    ScoredRule scored;
    scored.rule = rule;
    scored.voc = voc;
    scored.iteration = iteration;
    scored.dictionary_size = dictionary_size;

    if (voc > config.voc_threshold) {
      record.decision = IterationDecision::Accepted;
      trace.records.push_back(std::move(record));
      scored.accepted = true;
      return scored;
    }

    // Rejected: the covered validation negatives (this rule's false
    // positives) are added to the training pool before relearning.
    // Validation itself stays intact as the fixed yardstick; removing the
    // false positives would let a relearned rule score against a set its
    // own errors were deleted from, inflating every confidence toward 1.
    // Rows are injected at most once across a pool's lifetime.
    std::unordered_set<std::uint32_t> already_in_train(train.row_ids().begin(),
                                                       train.row_ids().end());
    std::vector<std::uint32_t> fp_table_rows;
    for (std::uint32_t i = 0; i < valid_view.size(); ++i) {
      if (valid_view.label(i) != target_label && matches(rule, valid_view, i) &&
          !already_in_train.count(valid_view.table_row_id(i))) {
        fp_table_rows.push_back(valid_view.table_row_id(i));
      }
    }
    train.append_table_rows(fp_table_rows);

    if (text) {
      const std::uint64_t expanded =
          static_cast<std::uint64_t>(dictionary_size) * config.expansion_factor;
      dictionary_size = static_cast<std::uint32_t>(
          std::min<std::uint64_t>(expanded, vocab_size));
    }

    record.decision = iteration == config.max_iterations ? IterationDecision::Fallback
                                                         : IterationDecision::Expanded;
    trace.records.push_back(std::move(record));

    if (iteration == config.max_iterations) {
      scored.accepted = false;
      return scored;
    }
  }
  throw NoRuleFoundError("iteration loop ended without a rule");  // unreachable
}

IterativeLabelResult learn_ruleset_iterative(Dataset train, Dataset validation,
                                             std::uint32_t target_label,
                                             const IterationConfig& config,
                                             const LearnerOptions& learner, std::uint64_t seed) {
  validate_iteration_config(config);
  IterativeLabelResult result;
  std::uint32_t consecutive_fallbacks = 0;
  for (std::uint32_t rule_index = 0; rule_index < config.max_rules_per_label; ++rule_index) {
    if (train.rows_with_label(target_label).empty()) {
      break;
    }
    RuleTrace trace;
    trace.label = target_label;
    trace.rule_index = rule_index;
    ScoredRule scored;
    try {
      scored = learn_confident_rule(train, validation, target_label, config, learner,
                                    derive_seed(seed, rule_index), trace);
    } catch (const NoRuleFoundError&) {
      break;
    }
    result.rules.push_back(scored);
    result.traces.push_back(std::move(trace));

    // Covered positives leave the training pool; negatives and the
    // validation pool stay.
    std::vector<std::uint32_t> covered_positives;
    for (std::uint32_t i = 0; i < train.size(); ++i) {
      if (train.label(i) == target_label && matches(scored.rule, train, i)) {
        covered_positives.push_back(i);
      }
    }
    train.remove_rows(covered_positives);

    if (scored.accepted) {
      consecutive_fallbacks = 0;
    } else if (++consecutive_fallbacks >= config.patience) {
      break;
    }
  }
  return result;
}

namespace {

RuleSet assemble_ruleset(const DataTable& table, std::vector<ScoredRule> rules) {
  RuleSet ruleset(table.mode(), table.schema_fingerprint(), table.labels(),
                  table.mode() == DatasetMode::Text ? "Type" : "label");
  for (ScoredRule& rule : rules) {
    ruleset.add(std::move(rule));
  }
  ruleset.bind_names_from(table);
  ruleset.finalize();
  return ruleset;
}

}  // namespace

MulticlassResult learn_multiclass(const Dataset& train, const Dataset& validation,
                                  const IterationConfig& config, const LearnerOptions& learner,
                                  std::uint64_t seed, bool parallel) {
  if (train.table_ptr() != validation.table_ptr()) {
    throw SchemaMismatchError("training and validation pools must share one table");
  }
  const std::uint32_t num_labels = static_cast<std::uint32_t>(train.table().labels().size());
  if (num_labels < 1) {
    throw DataError("cannot learn without labels");
  }

  std::vector<IterativeLabelResult> per_label(num_labels);
  const auto learn_label = [&](std::uint32_t label) {
    return learn_ruleset_iterative(train, validation, label, config, learner,
                                   derive_seed(seed, label));
  };
  if (parallel && num_labels > 1) {
    std::vector<std::future<IterativeLabelResult>> futures;
    futures.reserve(num_labels);
    for (std::uint32_t label = 0; label < num_labels; ++label) {
      futures.push_back(std::async(std::launch::async, learn_label, label));
    }
    for (std::uint32_t label = 0; label < num_labels; ++label) {
      per_label[label] = futures[label].get();
    }
  } else {
    for (std::uint32_t label = 0; label < num_labels; ++label) {
      per_label[label] = learn_label(label);
    }
  }

  MulticlassResult result;
  std::vector<ScoredRule> all_rules;
  for (IterativeLabelResult& lr : per_label) {
    all_rules.insert(all_rules.end(), lr.rules.begin(), lr.rules.end());
    for (RuleTrace& trace : lr.traces) {
      result.traces.push_back(std::move(trace));
    }
  }
  result.ruleset = assemble_ruleset(train.table(), std::move(all_rules));
  return result;
}

RuleSet learn_multiclass_baseline(const Dataset& train, const LearnerOptions& learner,
                                  std::uint64_t seed, bool parallel) {
  const std::uint32_t num_labels = static_cast<std::uint32_t>(train.table().labels().size());
  std::vector<std::vector<ScoredRule>> per_label(num_labels);
  const auto learn_label = [&](std::uint32_t label) {
    return learn_ruleset_baseline(learner, train, label, derive_seed(seed, label));
  };
  if (parallel && num_labels > 1) {
    std::vector<std::future<std::vector<ScoredRule>>> futures;
    futures.reserve(num_labels);
    for (std::uint32_t label = 0; label < num_labels; ++label) {
      futures.push_back(std::async(std::launch::async, learn_label, label));
    }
    for (std::uint32_t label = 0; label < num_labels; ++label) {
      per_label[label] = futures[label].get();
    }
  } else {
    for (std::uint32_t label = 0; label < num_labels; ++label) {
      per_label[label] = learn_label(label);
    }
  }
  std::vector<ScoredRule> all_rules;
  for (std::vector<ScoredRule>& rules : per_label) {
    all_rules.insert(all_rules.end(), rules.begin(), rules.end());
  }
  return assemble_ruleset(train.table(), std::move(all_rules));
}

std::string format_traces(const std::vector<RuleTrace>& traces, const DataTable& table,
                          const std::string& target_name) {
  std::string out;
  for (const RuleTrace& trace : traces) {
    out += "label \"" + table.labels().at(trace.label) + "\" rule " +
           std::to_string(trace.rule_index + 1) + "\n";
    for (const IterationRecord& record : trace.records) {
      const char* decision = record.decision == IterationDecision::Accepted   ? "accepted"
                             : record.decision == IterationDecision::Expanded ? "expanded"
                                                                              : "fallback";
      out += "  iteration " + std::to_string(record.iteration) + " dict " +
             std::to_string(record.dictionary_size) + " voc " + format_number(record.voc) + " " +
             decision + ": " + render(record.rule, table, target_name) + "\n";
    }
  }
  return out;
}

}  // namespace rulekit
