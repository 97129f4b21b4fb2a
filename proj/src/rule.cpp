#include "rule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace rulekit {

std::string format_number(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

void validate_rule(const Rule& rule) {
  if (rule.conditions.empty()) {
    throw DataError("a rule needs at least one condition");
  }
  for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
    for (std::size_t j = i + 1; j < rule.conditions.size(); ++j) {
      const Condition& a = rule.conditions[i];
      const Condition& b = rule.conditions[j];
      if (a.attribute != b.attribute) {
        continue;
      }
      const bool presence_clash = (a.op == ConditionOp::Present && b.op == ConditionOp::Absent) ||
                                  (a.op == ConditionOp::Absent && b.op == ConditionOp::Present);
      const bool equals_clash =
          a.op == ConditionOp::Equals && b.op == ConditionOp::Equals && a.symbol != b.symbol;
      const bool empty_interval =
          (a.op == ConditionOp::LessEqual && b.op == ConditionOp::GreaterEqual &&
           a.threshold < b.threshold) ||
          (a.op == ConditionOp::GreaterEqual && b.op == ConditionOp::LessEqual &&
           b.threshold < a.threshold);
      if (presence_clash || equals_clash || empty_interval) {
        throw DataError("rule has contradictory conditions on attribute " +
                        std::to_string(a.attribute));
      }
    }
  }
}

namespace {

bool condition_holds(const Condition& cond, const Dataset& data, std::uint32_t view_row) {
  const Row& row = data.row(view_row);
  if (data.mode() == DatasetMode::Text) {
    if (cond.op != ConditionOp::Present && cond.op != ConditionOp::Absent) {
      throw SchemaMismatchError("nominal/numeric condition against a text dataset");
    }
    if (cond.attribute >= data.table().vocabulary().size()) {
      throw SchemaMismatchError("condition refers to rank " + std::to_string(cond.attribute) +
                                " beyond the vocabulary");
    }
    const bool present = data.has_feature(view_row, cond.attribute);
    return cond.op == ConditionOp::Present ? present : !present;
  }
  if (cond.attribute >= row.values.size()) {
    throw SchemaMismatchError("condition refers to attribute " + std::to_string(cond.attribute) +
                              " missing from the example");
  }
  const double value = row.values[cond.attribute];
  switch (cond.op) {
    case ConditionOp::Equals:
      return value == static_cast<double>(cond.symbol);
    case ConditionOp::LessEqual:
      return value <= cond.threshold;
    case ConditionOp::GreaterEqual:
      return value >= cond.threshold;
    default:
      throw SchemaMismatchError("presence condition against a tabular dataset");
  }
}

}  // namespace

bool matches(const Rule& rule, const Dataset& data, std::uint32_t view_row) {
  for (const Condition& cond : rule.conditions) {
    if (!condition_holds(cond, data, view_row)) {
      return false;
    }
  }
  return true;
}

Coverage coverage(const Rule& rule, const Dataset& data, std::uint32_t target_label) {
  Coverage cov;
  for (std::uint32_t i = 0; i < data.size(); ++i) {
    if (matches(rule, data, i)) {
      if (data.label(i) == target_label) {
        ++cov.positives;
      } else {
        ++cov.negatives;
      }
    }
  }
  return cov;
}

RuleSet::RuleSet(DatasetMode mode, std::uint64_t schema_fingerprint,
                 std::vector<std::string> labels, std::string target_name)
    : mode_(mode),
      schema_fingerprint_(schema_fingerprint),
      labels_(std::move(labels)),
      target_name_(std::move(target_name)) {}

void RuleSet::add(ScoredRule rule) {
  validate_rule(rule.rule);
  if (rule.rule.label >= labels_.size()) {
    throw DataError("scored rule has an out-of-range label id");
  }
  rules_.push_back(std::move(rule));
}

void RuleSet::finalize() {
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const ScoredRule& a, const ScoredRule& b) { return a.voc > b.voc; });
}

void RuleSet::bind_attribute_name(std::uint32_t attribute, std::string name) {
  attribute_names_[attribute] = std::move(name);
}

void RuleSet::bind_symbol_name(std::uint32_t attribute, std::uint32_t symbol, std::string name) {
  symbol_names_[{attribute, symbol}] = std::move(name);
}

void RuleSet::bind_names_from(const DataTable& table) {
  for (const ScoredRule& scored : rules_) {
    for (const Condition& cond : scored.rule.conditions) {
      attribute_names_[cond.attribute] = table.attribute_name(cond.attribute);
      if (cond.op == ConditionOp::Equals) {
        symbol_names_[{cond.attribute, cond.symbol}] =
            table.attributes().at(cond.attribute).symbols.at(cond.symbol);
      }
    }
  }
}

const std::string& RuleSet::attribute_name(std::uint32_t attribute) const {
  auto it = attribute_names_.find(attribute);
  if (it == attribute_names_.end()) {
    throw DataError("rule set has no display name for attribute " + std::to_string(attribute));
  }
  return it->second;
}

const std::string& RuleSet::symbol_name(std::uint32_t attribute, std::uint32_t symbol) const {
  auto it = symbol_names_.find({attribute, symbol});
  if (it == symbol_names_.end()) {
    throw DataError("rule set has no display name for symbol " + std::to_string(symbol) +
                    " of attribute " + std::to_string(attribute));
  }
  return it->second;
}

std::optional<std::uint32_t> predict(const RuleSet& ruleset, const Dataset& data,
                                     std::uint32_t view_row, double voc_threshold) {
  if (ruleset.schema_fingerprint() != data.table().schema_fingerprint()) {
    throw SchemaMismatchError("rule set was built against a different schema");
  }
  for (const ScoredRule& scored : ruleset.rules()) {
    if (scored.voc <= voc_threshold) {
      continue;
    }
    if (matches(scored.rule, data, view_row)) {
      return scored.rule.label;
    }
  }
  return std::nullopt;
}

namespace {

template <typename AttrName, typename SymName>
std::string render_impl(const Rule& rule, AttrName&& attr_name, SymName&& sym_name,
                        const std::string& target_name, const std::string& label_name) {
  std::string out = "IF ";
  for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
    const Condition& cond = rule.conditions[i];
    if (i > 0) {
      out += " AND ";
    }
    out += attr_name(cond.attribute);
    switch (cond.op) {
      case ConditionOp::Present:
        out += " = 1";
        break;
      case ConditionOp::Absent:
        out += " = 0";
        break;
      case ConditionOp::Equals:
        out += " = " + sym_name(cond.attribute, cond.symbol);
        break;
      case ConditionOp::LessEqual:
        out += " <= " + format_number(cond.threshold);
        break;
      case ConditionOp::GreaterEqual:
        out += " >= " + format_number(cond.threshold);
        break;
    }
  }
  out += " THEN " + target_name + " = " + label_name;
  return out;
}

}  // namespace

std::string render(const Rule& rule, const RuleSet& ruleset) {
  return render_impl(
      rule, [&](std::uint32_t attr) { return ruleset.attribute_name(attr); },
      [&](std::uint32_t attr, std::uint32_t sym) { return ruleset.symbol_name(attr, sym); },
      ruleset.target_name(), ruleset.labels().at(rule.label));
}

std::string render(const Rule& rule, const DataTable& table, const std::string& target_name) {
  return render_impl(
      rule, [&](std::uint32_t attr) { return table.attribute_name(attr); },
      [&](std::uint32_t attr, std::uint32_t sym) {
        return table.attributes().at(attr).symbols.at(sym);
      },
      target_name, table.labels().at(rule.label));
}

}  // namespace rulekit
