#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace rulekit {

enum class ConditionOp : std::uint8_t {
  Present = 0,       // binary text feature occurs
  Absent = 1,        // binary text feature does not occur
  Equals = 2,        // nominal attribute equals a symbol
  LessEqual = 3,     // numeric attribute <= threshold
  GreaterEqual = 4,  // numeric attribute >= threshold
};

struct Condition {
  std::uint32_t attribute = 0;  // feature rank (text) or attribute index (tabular)
  ConditionOp op = ConditionOp::Present;
  double threshold = 0.0;    // LessEqual / GreaterEqual
  std::uint32_t symbol = 0;  // Equals

  friend bool operator==(const Condition& a, const Condition& b) {
    return a.attribute == b.attribute && a.op == b.op && a.threshold == b.threshold &&
           a.symbol == b.symbol;
  }
};

// A conjunctive if-then rule: every condition must hold for the rule to
// fire. Disjunction is expressed across rules, never within one.
struct Rule {
  std::uint32_t label = 0;
  std::vector<Condition> conditions;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.label == b.label && a.conditions == b.conditions;
  }
};

// Throws DataError when the conjunction is empty or self-contradictory
// (present and absent on one attribute, conflicting equals symbols, or an
// empty numeric interval).
void validate_rule(const Rule& rule);

struct ScoredRule {
  Rule rule;
  double voc = 0.0;  // confidence measured on held-out validation data
  bool accepted = false;
  std::uint32_t iteration = 0;
  std::uint32_t dictionary_size = 0;
};

struct Coverage {
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
};

// Full-conjunction match; no partial matching anywhere in rulekit. Throws
// SchemaMismatchError when the rule references an attribute the dataset
// schema does not have.
bool matches(const Rule& rule, const Dataset& data, std::uint32_t view_row);

// Counts matched examples with the target label (positives) and with any
// other label (negatives).
Coverage coverage(const Rule& rule, const Dataset& data, std::uint32_t target_label);

// An ordered rule collection bound to a schema. Rules are ordered by
// descending confidence with learning order breaking ties (earlier first).
class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(DatasetMode mode, std::uint64_t schema_fingerprint, std::vector<std::string> labels,
          std::string target_name);

  // Appends in learning order; finalize() establishes the prediction order.
  void add(ScoredRule rule);
  void finalize();

  // Records display names for attributes and nominal symbols referenced by
  // some rule, so a serialized rule set renders without the schema at hand.
  void bind_attribute_name(std::uint32_t attribute, std::string name);
  void bind_symbol_name(std::uint32_t attribute, std::uint32_t symbol, std::string name);
  void bind_names_from(const DataTable& table);

  const std::vector<ScoredRule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  DatasetMode mode() const noexcept { return mode_; }
  std::uint64_t schema_fingerprint() const noexcept { return schema_fingerprint_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& target_name() const noexcept { return target_name_; }
  const std::map<std::uint32_t, std::string>& attribute_names() const noexcept {
    return attribute_names_;
  }
  const std::map<std::pair<std::uint32_t, std::uint32_t>, std::string>& symbol_names()
      const noexcept {
    return symbol_names_;
  }
  const std::string& attribute_name(std::uint32_t attribute) const;
  const std::string& symbol_name(std::uint32_t attribute, std::uint32_t symbol) const;

 private:
  std::vector<ScoredRule> rules_;
  DatasetMode mode_ = DatasetMode::Text;
  std::uint64_t schema_fingerprint_ = 0;
  std::vector<std::string> labels_;
  std::string target_name_ = "Type";
  std::map<std::uint32_t, std::string> attribute_names_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::string> symbol_names_;
};

// First fully matched rule among those with voc strictly above the
// threshold, in rule-set order; nullopt means abstain. Throws
// SchemaMismatchError when the dataset was built against another schema.
std::optional<std::uint32_t> predict(const RuleSet& ruleset, const Dataset& data,
                                     std::uint32_t view_row, double voc_threshold);

// Renders one rule in report style:
//   IF dumb = 1 THEN Type = Hate Speech
//   IF Insulin >= 140 AND Insulin <= 170 THEN Diabetes = Yes
// The first form resolves names from a bound rule set, the second straight
// from a schema (used for rules that never made it into a rule set).
std::string render(const Rule& rule, const RuleSet& ruleset);
std::string render(const Rule& rule, const DataTable& table, const std::string& target_name);

// Shortest round-trip decimal form of a double ("140", "0.9", "142.5").
std::string format_number(double value);

}  // namespace rulekit
