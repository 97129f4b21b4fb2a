#include "learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "rng.hpp"

namespace rulekit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Candidate {
  Condition condition;
  double gain = kNegInf;
  bool found = false;

  // Strictly-greater replacement keeps the first maximum in enumeration
  // order, which realizes the attribute/operator/value tie-breaks.
  void offer(const Condition& cond, double g) {
    if (!found || g > gain) {
      condition = cond;
      gain = g;
      found = true;
    }
  }
};

bool attribute_used(const std::vector<Condition>& conditions, std::uint32_t attribute) {
  for (const Condition& c : conditions) {
    if (c.attribute == attribute) {
      return true;
    }
  }
  return false;
}

bool op_used(const std::vector<Condition>& conditions, std::uint32_t attribute, ConditionOp op) {
  for (const Condition& c : conditions) {
    if (c.attribute == attribute && c.op == op) {
      return true;
    }
  }
  return false;
}

// Candidate search over binary text features. One pass over the visible
// ranks of the covered rows fills per-feature presence counts; present and
// absent literals are then scored from those counts and the totals.
Candidate best_text_literal(const Dataset& data, const std::vector<std::uint32_t>& pos,
                            const std::vector<std::uint32_t>& neg,
                            const std::vector<Condition>& existing) {
  const std::uint32_t limit = data.feature_limit();
  std::vector<std::uint32_t> pos_present(limit, 0);
  std::vector<std::uint32_t> neg_present(limit, 0);
  const auto count = [&](const std::vector<std::uint32_t>& rows,
                         std::vector<std::uint32_t>& counts) {
    for (std::uint32_t i : rows) {
      for (std::uint32_t rank : data.row(i).ranks) {
        if (rank >= limit) {
          break;  // ranks are sorted
        }
        ++counts[rank];
      }
    }
  };
  count(pos, pos_present);
  count(neg, neg_present);

  const std::uint64_t p0 = pos.size();
  const std::uint64_t n0 = neg.size();
  Candidate best;
  for (std::uint32_t rank = 0; rank < limit; ++rank) {
    if (attribute_used(existing, rank)) {
      continue;
    }
    best.offer({rank, ConditionOp::Present, 0.0, 0},
               foil_gain(p0, n0, pos_present[rank], neg_present[rank]));
    best.offer({rank, ConditionOp::Absent, 0.0, 0},
               foil_gain(p0, n0, p0 - pos_present[rank], n0 - neg_present[rank]));
  }
  return best;
}

Candidate best_tabular_literal(const Dataset& data, const std::vector<std::uint32_t>& pos,
                               const std::vector<std::uint32_t>& neg,
                               const std::vector<Condition>& existing) {
  const std::uint64_t p0 = pos.size();
  const std::uint64_t n0 = neg.size();
  const auto& attributes = data.table().attributes();
  Candidate best;

  std::vector<std::pair<double, bool>> values;  // (value, is_positive)
  for (std::uint32_t attr = 0; attr < attributes.size(); ++attr) {
    const AttributeDecl& decl = attributes[attr];
    if (!decl.numeric) {
      if (op_used(existing, attr, ConditionOp::Equals)) {
        continue;
      }
      std::vector<std::uint64_t> pos_count(decl.symbols.size(), 0);
      std::vector<std::uint64_t> neg_count(decl.symbols.size(), 0);
      for (std::uint32_t i : pos) {
        ++pos_count[static_cast<std::size_t>(data.row(i).values[attr])];
      }
      for (std::uint32_t i : neg) {
        ++neg_count[static_cast<std::size_t>(data.row(i).values[attr])];
      }
      for (std::uint32_t sym = 0; sym < decl.symbols.size(); ++sym) {
        best.offer({attr, ConditionOp::Equals, 0.0, sym},
                   foil_gain(p0, n0, pos_count[sym], neg_count[sym]));
      }
      continue;
    }

    const bool le_free = !op_used(existing, attr, ConditionOp::LessEqual);
    const bool ge_free = !op_used(existing, attr, ConditionOp::GreaterEqual);
    if (!le_free && !ge_free) {
      continue;
    }
    values.clear();
    values.reserve(pos.size() + neg.size());
    for (std::uint32_t i : pos) {
      values.emplace_back(data.row(i).values[attr], true);
    }
    for (std::uint32_t i : neg) {
      values.emplace_back(data.row(i).values[attr], false);
    }
    std::sort(values.begin(), values.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Cut points sit between adjacent distinct values whose example groups
    // are not both pure with the same class.
    std::vector<std::pair<double, std::uint64_t>> cuts;  // (threshold, #examples <= it)
    {
      std::size_t i = 0;
      double prev_value = 0.0;
      bool prev_pos = false, prev_neg = false, have_prev = false;
      std::uint64_t prefix = 0;
      while (i < values.size()) {
        const double v = values[i].first;
        bool has_pos = false, has_neg = false;
        std::size_t j = i;
        while (j < values.size() && values[j].first == v) {
          (values[j].second ? has_pos : has_neg) = true;
          ++j;
        }
        if (have_prev) {
          const bool same_pure_class = (prev_pos && !prev_neg && has_pos && !has_neg) ||
                                       (!prev_pos && prev_neg && !has_pos && has_neg);
          if (!same_pure_class) {
            cuts.emplace_back((prev_value + v) / 2.0, prefix);
          }
        }
        prefix += j - i;
        prev_value = v;
        prev_pos = has_pos;
        prev_neg = has_neg;
        have_prev = true;
        i = j;
      }
    }

    // Prefix sums of positive counts in sorted order.
    std::vector<std::uint64_t> cum_pos(values.size() + 1, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      cum_pos[i + 1] = cum_pos[i] + (values[i].second ? 1 : 0);
    }
    if (le_free) {
      for (const auto& [threshold, below] : cuts) {
        const std::uint64_t p1 = cum_pos[below];
        const std::uint64_t n1 = below - p1;
        best.offer({attr, ConditionOp::LessEqual, threshold, 0}, foil_gain(p0, n0, p1, n1));
      }
    }
    if (ge_free) {
      for (const auto& [threshold, below] : cuts) {
        const std::uint64_t p1 = p0 - cum_pos[below];
        const std::uint64_t n1 = n0 - (below - cum_pos[below]);
        best.offer({attr, ConditionOp::GreaterEqual, threshold, 0}, foil_gain(p0, n0, p1, n1));
      }
    }
  }
  return best;
}

bool condition_covers(const Condition& cond, const Dataset& data, std::uint32_t view_row) {
  const Rule probe{0, {cond}};
  return matches(probe, data, view_row);
}

void filter_covered(const Condition& cond, const Dataset& data, std::vector<std::uint32_t>& rows) {
  std::vector<std::uint32_t> kept;
  kept.reserve(rows.size());
  for (std::uint32_t i : rows) {
    if (condition_covers(cond, data, i)) {
      kept.push_back(i);
    }
  }
  rows = std::move(kept);
}

Rule grow_rule(const Dataset& data, std::span<const std::uint32_t> positives,
               std::span<const std::uint32_t> negatives, const LearnerOptions& options,
               std::vector<GrowthStep>* trace) {
  if (positives.empty()) {
    throw NoRuleFoundError("cannot grow a rule without positive examples");
  }
  std::vector<std::uint32_t> pos(positives.begin(), positives.end());
  std::vector<std::uint32_t> neg(negatives.begin(), negatives.end());

  Rule rule;
  while (!neg.empty() && rule.conditions.size() < options.max_conditions) {
    const Candidate best = data.mode() == DatasetMode::Text
                               ? best_text_literal(data, pos, neg, rule.conditions)
                               : best_tabular_literal(data, pos, neg, rule.conditions);
    if (!best.found || !(best.gain > 0.0)) {
      if (rule.conditions.empty()) {
        throw NoRuleFoundError("no literal with positive gain for the first condition");
      }
      break;
    }
    rule.conditions.push_back(best.condition);
    filter_covered(best.condition, data, pos);
    filter_covered(best.condition, data, neg);
    if (trace) {
      trace->push_back(GrowthStep{best.condition, best.gain});
    }
  }
  return rule;
}

// Stratified seeded 2/3-1/3 split of one class pool.
void split_pool(std::vector<std::uint32_t> pool, double grow_fraction, Rng& rng,
                std::vector<std::uint32_t>& grow, std::vector<std::uint32_t>& prune) {
  shuffle(pool, rng);
  const std::size_t grow_size =
      static_cast<std::size_t>(std::ceil(grow_fraction * static_cast<double>(pool.size())));
  grow.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(grow_size));
  prune.assign(pool.begin() + static_cast<std::ptrdiff_t>(grow_size), pool.end());
}

// Bits to identify a k-subset of t items (0 when the choice is forced).
double subset_bits(double t, double k) {
  if (t <= 0.0 || k <= 0.0 || k >= t) {
    return 0.0;
  }
  const double p = k / t;
  return -k * std::log2(p) - (t - k) * std::log2(1.0 - p);
}

double train_precision(const Rule& rule, const Dataset& data, std::uint32_t target_label) {
  const Coverage cov = coverage(rule, data, target_label);
  const std::uint64_t total = cov.positives + cov.negatives;
  return total == 0 ? 0.0 : static_cast<double>(cov.positives) / static_cast<double>(total);
}

}  // namespace

void validate_options(const LearnerOptions& options) {
  if (options.max_conditions < 1) {
    throw ConfigError("max_conditions must be at least 1");
  }
  if (!(options.grow_fraction > 0.0 && options.grow_fraction < 1.0)) {
    throw ConfigError("grow_fraction must lie in (0, 1)");
  }
  if (!(options.mdl_slack_bits >= 0.0)) {
    throw ConfigError("mdl_slack_bits must be non-negative");
  }
  if (options.max_rules_per_label < 1) {
    throw ConfigError("max_rules_per_label must be at least 1");
  }
}

double foil_gain(std::uint64_t p0, std::uint64_t n0, std::uint64_t p1, std::uint64_t n1) {
  if (p1 == 0) {
    return kNegInf;
  }
  const double before = std::log2(static_cast<double>(p0) / static_cast<double>(p0 + n0));
  const double after = std::log2(static_cast<double>(p1) / static_cast<double>(p1 + n1));
  return static_cast<double>(p1) * (after - before);
}

Rule foil_learn_one_rule(const Dataset& data, std::span<const std::uint32_t> positives,
                         std::span<const std::uint32_t> negatives, const LearnerOptions& options,
                         std::vector<GrowthStep>* trace) {
  return grow_rule(data, positives, negatives, options, trace);
}

Rule ripper_grow(const Dataset& data, std::span<const std::uint32_t> positives_grow,
                 std::span<const std::uint32_t> negatives_grow, const LearnerOptions& options,
                 std::vector<GrowthStep>* trace) {
  return grow_rule(data, positives_grow, negatives_grow, options, trace);
}

Rule ripper_prune(Rule rule, const Dataset& data, std::span<const std::uint32_t> positives_prune,
                  std::span<const std::uint32_t> negatives_prune) {
  if (rule.conditions.empty()) {
    return rule;
  }
  std::vector<std::uint32_t> pos(positives_prune.begin(), positives_prune.end());
  std::vector<std::uint32_t> neg(negatives_prune.begin(), negatives_prune.end());

  double best_value = kNegInf;
  std::size_t best_length = rule.conditions.size();
  bool any_covered = false;
  for (std::size_t length = 1; length <= rule.conditions.size(); ++length) {
    filter_covered(rule.conditions[length - 1], data, pos);
    filter_covered(rule.conditions[length - 1], data, neg);
    const double p = static_cast<double>(pos.size());
    const double n = static_cast<double>(neg.size());
    if (p + n == 0.0) {
      continue;
    }
    any_covered = true;
    const double value = (p - n) / (p + n);
    if (value > best_value) {
      best_value = value;
      best_length = length;
    }
  }
  if (!any_covered) {
    return rule;  // the prune partition says nothing about any prefix
  }
  rule.conditions.resize(best_length);
  return rule;
}

Rule learn_one_rule(const LearnerOptions& options, const Dataset& train,
                    std::uint32_t target_label, std::uint64_t seed) {
  validate_options(options);
  const std::vector<std::uint32_t> pos = train.rows_with_label(target_label);
  const std::vector<std::uint32_t> neg = train.rows_without_label(target_label);
  Rule rule;
  if (options.kind == LearnerKindId::Foil) {
    rule = foil_learn_one_rule(train, pos, neg, options);
  } else {
    Rng rng(seed);
    std::vector<std::uint32_t> grow_pos, prune_pos, grow_neg, prune_neg;
    split_pool(pos, options.grow_fraction, rng, grow_pos, prune_pos);
    split_pool(neg, options.grow_fraction, rng, grow_neg, prune_neg);
    rule = ripper_grow(train, grow_pos, grow_neg, options);
    rule = ripper_prune(std::move(rule), train, prune_pos, prune_neg);
  }
  rule.label = target_label;
  return rule;
}

double ripper_theory_bits(std::size_t conditions, double universe) {
  const double k = static_cast<double>(conditions);
  return 0.5 * (std::log2(k + 1.0) + subset_bits(universe, k));
}

double ripper_exception_bits(std::uint64_t covered, std::uint64_t false_positives,
                             std::uint64_t uncovered, std::uint64_t false_negatives) {
  return std::log2(static_cast<double>(covered + uncovered) + 1.0) +
         subset_bits(static_cast<double>(covered), static_cast<double>(false_positives)) +
         subset_bits(static_cast<double>(uncovered), static_cast<double>(false_negatives));
}

double condition_universe(const Dataset& data) {
  if (data.mode() == DatasetMode::Text) {
    return 2.0 * static_cast<double>(data.feature_limit());
  }
  double universe = 0.0;
  const auto& attributes = data.table().attributes();
  for (std::uint32_t attr = 0; attr < attributes.size(); ++attr) {
    if (!attributes[attr].numeric) {
      universe += static_cast<double>(attributes[attr].symbols.size());
      continue;
    }
    std::vector<double> values;
    values.reserve(data.size());
    for (std::uint32_t i = 0; i < data.size(); ++i) {
      values.push_back(data.row(i).values[attr]);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    universe += 2.0 * static_cast<double>(values.size());
  }
  return std::max(universe, 1.0);
}

std::vector<ScoredRule> ripper_learn_ruleset(const Dataset& train, std::uint32_t target_label,
                                             const LearnerOptions& options, std::uint64_t seed) {
  validate_options(options);
  const std::vector<std::uint32_t> pos_all = train.rows_with_label(target_label);
  const std::vector<std::uint32_t> neg_all = train.rows_without_label(target_label);
  std::vector<ScoredRule> rules;
  if (pos_all.empty()) {
    return rules;
  }

  const double universe = condition_universe(train);
  const auto total_dl = [&](const std::vector<ScoredRule>& current) {
    double theory = 0.0;
    for (const ScoredRule& r : current) {
      theory += ripper_theory_bits(r.rule.conditions.size(), universe);
    }
    std::uint64_t covered = 0, fp = 0, fn = 0;
    const auto covered_by_any = [&](std::uint32_t i) {
      for (const ScoredRule& r : current) {
        if (matches(r.rule, train, i)) {
          return true;
        }
      }
      return false;
    };
    for (std::uint32_t i : pos_all) {
      if (covered_by_any(i)) {
        ++covered;
      } else {
        ++fn;
      }
    }
    for (std::uint32_t i : neg_all) {
      if (covered_by_any(i)) {
        ++covered;
        ++fp;
      }
    }
    const std::uint64_t total = pos_all.size() + neg_all.size();
    return theory + ripper_exception_bits(covered, fp, total - covered, fn);
  };

  double min_dl = total_dl(rules);
  std::vector<std::uint32_t> remaining = pos_all;
  std::uint64_t rule_index = 0;
  while (!remaining.empty() && rules.size() < options.max_rules_per_label) {
    Rng rng(derive_seed(seed, rule_index++));
    std::vector<std::uint32_t> grow_pos, prune_pos, grow_neg, prune_neg;
    split_pool(remaining, options.grow_fraction, rng, grow_pos, prune_pos);
    split_pool(neg_all, options.grow_fraction, rng, grow_neg, prune_neg);

    Rule rule;
    try {
      rule = ripper_grow(train, grow_pos, grow_neg, options);
    } catch (const NoRuleFoundError&) {
      break;
    }
    rule = ripper_prune(std::move(rule), train, prune_pos, prune_neg);
    rule.label = target_label;

    // Standard accept test: a pruned rule whose prune-partition error
    // reaches 50% signals that the remaining positives are noise.
    {
      std::uint64_t p = 0, n = 0;
      for (std::uint32_t i : prune_pos) {
        p += matches(rule, train, i) ? 1 : 0;
      }
      for (std::uint32_t i : prune_neg) {
        n += matches(rule, train, i) ? 1 : 0;
      }
      if (p + n > 0 && n >= p) {
        break;
      }
    }

    ScoredRule scored;
    scored.rule = rule;
    scored.voc = train_precision(rule, train, target_label);
    scored.accepted = true;
    scored.iteration = 0;
    scored.dictionary_size = train.feature_limit();
    rules.push_back(scored);

    const double dl = total_dl(rules);
    if (dl > min_dl + options.mdl_slack_bits) {
      rules.pop_back();
      break;
    }
    min_dl = std::min(min_dl, dl);

    std::vector<std::uint32_t> still_uncovered;
    still_uncovered.reserve(remaining.size());
    for (std::uint32_t i : remaining) {
      if (!matches(rule, train, i)) {
        still_uncovered.push_back(i);
      }
    }
    remaining = std::move(still_uncovered);
  }
  return rules;
}

std::vector<ScoredRule> foil_learn_ruleset(const Dataset& train, std::uint32_t target_label,
                                           const LearnerOptions& options, std::uint64_t seed) {
  (void)seed;  // FOIL sequential covering is deterministic without randomness
  validate_options(options);
  const std::vector<std::uint32_t> neg_all = train.rows_without_label(target_label);
  std::vector<std::uint32_t> remaining = train.rows_with_label(target_label);
  std::vector<ScoredRule> rules;
  while (!remaining.empty() && rules.size() < options.max_rules_per_label) {
    Rule rule;
    try {
      rule = foil_learn_one_rule(train, remaining, neg_all, options);
    } catch (const NoRuleFoundError&) {
      break;
    }
    rule.label = target_label;

    ScoredRule scored;
    scored.rule = rule;
    scored.voc = train_precision(rule, train, target_label);
    scored.accepted = true;
    scored.iteration = 0;
    scored.dictionary_size = train.feature_limit();
    rules.push_back(scored);

    std::vector<std::uint32_t> still_uncovered;
    still_uncovered.reserve(remaining.size());
    for (std::uint32_t i : remaining) {
      if (!matches(rule, train, i)) {
        still_uncovered.push_back(i);
      }
    }
    remaining = std::move(still_uncovered);
  }
  return rules;
}

std::vector<ScoredRule> learn_ruleset_baseline(const LearnerOptions& options, const Dataset& train,
                                               std::uint32_t target_label, std::uint64_t seed) {
  return options.kind == LearnerKindId::Foil
             ? foil_learn_ruleset(train, target_label, options, seed)
             : ripper_learn_ruleset(train, target_label, options, seed);
}

}  // namespace rulekit
