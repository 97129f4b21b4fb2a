#include "evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include "errors.hpp"
#include "peak_memory.hpp"
#include "rng.hpp"
#include "ruleset_io.hpp"

namespace rulekit {

namespace {

std::size_t rounded_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

}  // namespace

SplitResult split(const Dataset& data, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0) ||
      !(spec.validation_fraction_of_train > 0.0 && spec.validation_fraction_of_train < 1.0)) {
    throw ConfigError("split fractions must lie in (0, 1)");
  }

  std::vector<std::vector<std::uint32_t>> groups;
  if (spec.stratified) {
    const std::size_t num_labels = data.table().labels().size();
    groups.resize(num_labels);
    for (std::uint32_t i = 0; i < data.size(); ++i) {
      groups[data.label(i)].push_back(i);
    }
    for (std::size_t label = 0; label < num_labels; ++label) {
      if (!groups[label].empty() && groups[label].size() < 10) {
        throw InsufficientDataError("label \"" + data.table().labels()[label] + "\" has only " +
                                    std::to_string(groups[label].size()) +
                                    " examples; stratified splitting needs at least 10");
      }
    }
  } else {
    groups.resize(1);
    groups[0].resize(data.size());
    for (std::uint32_t i = 0; i < data.size(); ++i) {
      groups[0][i] = i;
    }
  }

  Rng rng(spec.seed);
  std::vector<std::uint32_t> train_rows, valid_rows, test_rows;
  for (std::vector<std::uint32_t>& group : groups) {
    if (group.empty()) {
      continue;
    }
    shuffle(group, rng);
    const std::size_t n_test = rounded_count(spec.test_fraction, group.size());
    const std::size_t remaining = group.size() - n_test;
    const std::size_t n_valid = rounded_count(spec.validation_fraction_of_train, remaining);
    test_rows.insert(test_rows.end(), group.begin(),
                     group.begin() + static_cast<std::ptrdiff_t>(n_test));
    valid_rows.insert(valid_rows.end(), group.begin() + static_cast<std::ptrdiff_t>(n_test),
                      group.begin() + static_cast<std::ptrdiff_t>(n_test + n_valid));
    train_rows.insert(train_rows.end(), group.begin() + static_cast<std::ptrdiff_t>(n_test + n_valid),
                      group.end());
  }
  // Canonical order inside each pool; learners reshuffle where they need to.
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(valid_rows.begin(), valid_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  SplitResult result{data.select(train_rows), data.select(valid_rows), data.select(test_rows)};
  return result;
}

EvaluationReport evaluate(const RuleSet& ruleset, const Dataset& test,
                          std::span<const double> thresholds) {
  if (ruleset.schema_fingerprint() != test.table().schema_fingerprint()) {
    throw SchemaMismatchError("rule set and test data were built against different schemas");
  }

  // Per example, the (voc, label) sequence of fully matched rules in rule-set
  // order; the prediction at threshold t is the first entry with voc > t.
  struct Match {
    double voc;
    std::uint32_t label;
  };
  std::vector<std::vector<Match>> matches_per_row(test.size());
  for (std::uint32_t i = 0; i < test.size(); ++i) {
    for (const ScoredRule& scored : ruleset.rules()) {
      if (matches(scored.rule, test, i)) {
        matches_per_row[i].push_back({scored.voc, scored.rule.label});
      }
    }
  }

  const auto sweep_row = [&](double threshold) {
    ThresholdRow row;
    row.threshold = threshold;
    for (std::uint32_t i = 0; i < test.size(); ++i) {
      const Match* hit = nullptr;
      for (const Match& m : matches_per_row[i]) {
        if (m.voc > threshold) {
          hit = &m;
          break;
        }
      }
      if (!hit) {
        ++row.abstained;
        continue;
      }
      ++row.predicted;
      if (hit->label == test.label(i)) {
        ++row.correct;
      }
    }
    row.precision =
        row.predicted == 0 ? 0.0 : static_cast<double>(row.correct) / static_cast<double>(row.predicted);
    return row;
  };

  EvaluationReport report;
  report.total_examples = test.size();
  for (double t : thresholds) {
    report.rows.push_back(sweep_row(t));
  }
  const ThresholdRow zero = sweep_row(0.0);
  report.overall_accuracy =
      test.size() == 0 ? 0.0 : static_cast<double>(zero.correct) / static_cast<double>(test.size());
  return report;
}

namespace {

using nlohmann::json;

json report_to_json(const EvaluationReport& report) {
  json rows = json::array();
  for (const ThresholdRow& row : report.rows) {
    rows.push_back({{"threshold", row.threshold},
                    {"predicted", row.predicted},
                    {"correct", row.correct},
                    {"abstained", row.abstained},
                    {"precision", row.precision}});
  }
  return json{{"rows", rows},
              {"overall_accuracy", report.overall_accuracy},
              {"total_examples", report.total_examples},
              {"wall_seconds", report.wall_seconds}};
}

EvaluationReport report_from_json(const json& j) {
  EvaluationReport report;
  for (const json& row : j.at("rows")) {
    report.rows.push_back(ThresholdRow{row.at("threshold").get<double>(),
                                       row.at("predicted").get<std::uint64_t>(),
                                       row.at("correct").get<std::uint64_t>(),
                                       row.at("abstained").get<std::uint64_t>(),
                                       row.at("precision").get<double>()});
  }
  report.overall_accuracy = j.at("overall_accuracy").get<double>();
  report.total_examples = j.at("total_examples").get<std::uint64_t>();
  report.wall_seconds = j.at("wall_seconds").get<double>();
  return report;
}

RunOutcome run_leg(bool iterative, const Dataset& train, const Dataset& valid, const Dataset& test,
                   const ComparisonSetup& setup) {
  const auto started = std::chrono::steady_clock::now();
  RunOutcome outcome;
  if (iterative) {
    MulticlassResult learned = learn_multiclass(train, valid, setup.iteration, setup.learner,
                                                setup.seed, setup.parallel_labels);
    outcome.ruleset = std::move(learned.ruleset);
    outcome.traces = std::move(learned.traces);
  } else {
    outcome.ruleset =
        learn_multiclass_baseline(train, setup.learner, setup.seed, setup.parallel_labels);
  }
  outcome.report = evaluate(outcome.ruleset, test, setup.thresholds);
  outcome.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return outcome;
}

}  // namespace

ComparisonRecord compare_runs(const Dataset& data, const ComparisonSetup& setup) {
  validate_options(setup.learner);
  validate_iteration_config(setup.iteration);

  SplitSpec split_spec = setup.split;
  split_spec.seed = setup.seed;
  SplitResult parts = split(data, split_spec);

  // The baseline trains on the whole training portion: the validation carve-
  // out exists only for the confidence-gated leg.
  std::vector<std::uint32_t> baseline_ids(parts.train.row_ids().begin(),
                                          parts.train.row_ids().end());
  baseline_ids.insert(baseline_ids.end(), parts.validation.row_ids().begin(),
                      parts.validation.row_ids().end());
  std::sort(baseline_ids.begin(), baseline_ids.end());
  const Dataset baseline_train(data.table_ptr(), std::move(baseline_ids));

  const auto run = [&](bool iterative) {
    return run_leg(iterative, iterative ? parts.train : baseline_train, parts.validation,
                   parts.test, setup);
  };

  ComparisonRecord record;
  if (setup.measure_memory) {
    // Each leg runs in its own forked child so one leg's allocator high-water
    // mark cannot mask the other's. Traces do not travel back through the
    // pipe; peak-measured comparisons only need rule sets and reports.
    const auto measured = [&](bool iterative) {
      RunOutcome outcome;
      try {
        MeasuredChildRun child = run_in_child_measured([&]() {
          RunOutcome inner = run(iterative);
          json payload{{"ruleset", serialize_ruleset(inner.ruleset)},
                       {"report", report_to_json(inner.report)}};
          return payload.dump();
        });
        json payload = json::parse(child.payload);
        outcome.ruleset = parse_ruleset(payload.at("ruleset").get<std::string>());
        outcome.report = report_from_json(payload.at("report"));
        outcome.report.peak_memory_bytes = child.peak_rss_bytes;
      } catch (const Error&) {
        outcome = run(iterative);  // measurement unsupported; peak stays absent
      }
      return outcome;
    };
    record.baseline = measured(false);
    record.iterative = measured(true);
  } else {
    record.baseline = run(false);
    record.iterative = run(true);
  }
  return record;
}

}  // namespace rulekit
