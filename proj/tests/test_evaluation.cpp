#include <doctest.h>

#include <set>

#include "errors.hpp"
#include "evaluation.hpp"
#include "peak_memory.hpp"
#include "rng.hpp"
#include "synthetic.hpp"
#include "test_helpers.hpp"

using namespace rulekit;

namespace {

Dataset uniform_dataset(std::size_t n, const std::string& label) {
  std::vector<std::string> docs;
  std::vector<std::string> labels;
  Rng rng(1);
  for (std::size_t i = 0; i < n; ++i) {
    docs.push_back("wform" + std::to_string(rng.below(6)));
    labels.push_back(label);
  }
  return helpers::make_text_dataset(docs, labels);
}

}  // namespace

TEST_CASE("default split of 1000 examples is 200/120/680") {
  const Dataset data = uniform_dataset(1000, "only");
  const SplitResult parts = split(data, SplitSpec{0.2, 0.15, 1, true});
  CHECK(parts.test.size() == 200);
  CHECK(parts.validation.size() == 120);
  CHECK(parts.train.size() == 680);
}

TEST_CASE("splits are disjoint, exhaustive and seed-reproducible") {
  const Dataset data = helpers::random_text_dataset(6, 300, 0.4, 13);
  const SplitSpec spec{0.2, 0.15, 99, true};
  const SplitResult a = split(data, spec);
  const SplitResult b = split(data, spec);

  const auto ids = [](const Dataset& d) {
    return std::vector<std::uint32_t>(d.row_ids().begin(), d.row_ids().end());
  };
  CHECK(ids(a.train) == ids(b.train));
  CHECK(ids(a.validation) == ids(b.validation));
  CHECK(ids(a.test) == ids(b.test));

  std::set<std::uint32_t> all;
  for (const Dataset* part : {&a.train, &a.validation, &a.test}) {
    for (std::uint32_t id : part->row_ids()) {
      CHECK(all.insert(id).second);  // disjoint
    }
  }
  CHECK(all.size() == data.size());  // exhaustive

  const SplitResult c = split(data, SplitSpec{0.2, 0.15, 100, true});
  CHECK(ids(a.test) != ids(c.test));  // the seed matters
}

TEST_CASE("stratified splits keep per-label proportions within one example") {
  std::vector<std::string> docs;
  std::vector<std::string> labels;
  Rng rng(2);
  for (int i = 0; i < 900; ++i) {
    docs.push_back("x" + std::to_string(rng.below(5)));
    labels.push_back("big");
  }
  for (int i = 0; i < 100; ++i) {
    docs.push_back("y" + std::to_string(rng.below(5)));
    labels.push_back("small");
  }
  const Dataset data = helpers::make_text_dataset(docs, labels);
  const SplitResult parts = split(data, SplitSpec{0.2, 0.15, 7, true});

  const auto count_label = [&](const Dataset& part, const std::string& name) {
    const std::uint32_t id = helpers::label_id(data, name);
    std::size_t count = 0;
    for (std::uint32_t i = 0; i < part.size(); ++i) {
      count += part.label(i) == id ? 1 : 0;
    }
    return count;
  };
  CHECK(count_label(parts.test, "big") == 180);
  CHECK(count_label(parts.test, "small") == 20);
}

TEST_CASE("too few examples per label fail a stratified split") {
  const Dataset data = helpers::make_text_dataset(
      {"a b", "b c", "c d", "d e", "e f", "f g", "g h", "h i", "i j", "j k", "tiny doc"},
      {"big", "big", "big", "big", "big", "big", "big", "big", "big", "big", "small"});
  CHECK_THROWS_AS(split(data, SplitSpec{0.2, 0.15, 1, true}), InsufficientDataError);
}

namespace {

RuleSet fixture_ruleset(const Dataset& data, const std::vector<std::pair<std::string, double>>&
                                                  gram_vocs /* gram -> confidence, label pos */) {
  RuleSet ruleset(DatasetMode::Text, data.table().schema_fingerprint(), data.table().labels(),
                  "Type");
  for (const auto& [gram, voc] : gram_vocs) {
    ScoredRule scored;
    scored.rule = Rule{helpers::label_id(data, "pos"),
                       {{helpers::rank_of(data, gram), ConditionOp::Present, 0, 0}}};
    scored.voc = voc;
    scored.accepted = voc > 0.9;
    ruleset.add(scored);
  }
  ruleset.bind_names_from(data.table());
  ruleset.finalize();
  return ruleset;
}

}  // namespace

TEST_CASE("a hand-scored 30-example fixture evaluates to hand-counted numbers") {
  // 12 documents with "hit" (9 pos, 3 neg), 6 with only "weak" (2 pos,
  // 4 neg), 12 plain (3 pos, 9 neg). Rules: hit->pos voc .95,
  // weak->pos voc .7.
  std::vector<std::string> docs;
  std::vector<std::string> labels;
  for (int i = 0; i < 9; ++i) { docs.push_back("hit d" + std::to_string(i)); labels.push_back("pos"); }
  for (int i = 0; i < 3; ++i) { docs.push_back("hit e" + std::to_string(i)); labels.push_back("neg"); }
  for (int i = 0; i < 2; ++i) { docs.push_back("weak f" + std::to_string(i)); labels.push_back("pos"); }
  for (int i = 0; i < 4; ++i) { docs.push_back("weak g" + std::to_string(i)); labels.push_back("neg"); }
  for (int i = 0; i < 3; ++i) { docs.push_back("plain h" + std::to_string(i)); labels.push_back("pos"); }
  for (int i = 0; i < 9; ++i) { docs.push_back("plain i" + std::to_string(i)); labels.push_back("neg"); }
  const Dataset data = helpers::make_text_dataset(docs, labels);
  REQUIRE(data.size() == 30);
  const RuleSet ruleset = fixture_ruleset(data, {{"hit", 0.95}, {"weak", 0.7}});

  const std::vector<double> thresholds{0.0, 0.6, 0.7, 0.8, 0.9};
  const EvaluationReport report = evaluate(ruleset, data, thresholds);
  REQUIRE(report.rows.size() == 5);

  // t in {0, .6}: both rules active -> predicted 18, correct 9+2=11.
  CHECK(report.rows[0].predicted == 18);
  CHECK(report.rows[0].correct == 11);
  CHECK(report.rows[0].abstained == 12);
  CHECK(report.rows[1].predicted == 18);
  // t in {.7, .8, .9}: only "hit" -> predicted 12, correct 9.
  for (std::size_t i = 2; i < 5; ++i) {
    CHECK(report.rows[i].predicted == 12);
    CHECK(report.rows[i].correct == 9);
    CHECK(report.rows[i].abstained == 18);
    CHECK(report.rows[i].precision == doctest::Approx(0.75));
  }
  CHECK(report.rows[0].precision == doctest::Approx(11.0 / 18.0));
  // Overall accuracy at threshold 0 with abstentions as errors: 11/30.
  CHECK(report.overall_accuracy == doctest::Approx(11.0 / 30.0));
}

TEST_CASE("when every rule has confidence 1 the sweep rows are identical") {
  const Dataset data = helpers::make_text_dataset(
      {"alpha a", "alpha b", "bravo c", "bravo d"}, {"pos", "pos", "neg", "neg"});
  const RuleSet ruleset = fixture_ruleset(data, {{"alpha", 1.0}});
  const std::vector<double> thresholds{0.0, 0.6, 0.7, 0.8, 0.9};
  const EvaluationReport report = evaluate(ruleset, data, thresholds);
  for (const ThresholdRow& row : report.rows) {
    CHECK(row.predicted == report.rows[0].predicted);
    CHECK(row.correct == report.rows[0].correct);
    CHECK(row.abstained == report.rows[0].abstained);
  }
}

TEST_CASE("predicted counts never increase along the threshold sweep") {
  Rng rng(555);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = helpers::random_text_dataset(8, 80, 0.4, 900 + trial);
    RuleSet ruleset(DatasetMode::Text, data.table().schema_fingerprint(), data.table().labels(),
                    "Type");
    for (int r = 0; r < 8; ++r) {
      ScoredRule scored;
      scored.rule.label = static_cast<std::uint32_t>(rng.below(2));
      scored.rule.conditions.push_back(
          {static_cast<std::uint32_t>(rng.below(8)),
           rng.unit() < 0.5 ? ConditionOp::Present : ConditionOp::Absent, 0, 0});
      scored.voc = rng.unit();
      ruleset.add(scored);
    }
    ruleset.finalize();
    const std::vector<double> thresholds{0.0, 0.6, 0.7, 0.8, 0.9};
    const EvaluationReport report = evaluate(ruleset, data, thresholds);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      CHECK(report.rows[i].predicted <= report.rows[i - 1].predicted);
    }
  }
}

TEST_CASE("evaluation refuses a rule set from another schema") {
  const Dataset data = helpers::make_text_dataset({"alpha", "beta"}, {"pos", "neg"});
  const Dataset other = helpers::make_text_dataset({"gamma", "delta"}, {"pos", "neg"});
  const RuleSet ruleset = fixture_ruleset(data, {{"alpha", 1.0}});
  const std::vector<double> thresholds{0.0};
  CHECK_THROWS_AS(evaluate(ruleset, other, thresholds), SchemaMismatchError);
}

TEST_CASE("baseline and iterative legs both learn a planted concept") {
  SyntheticSpec spec;
  spec.vocabulary_size = 300;
  spec.document_count = 900;
  spec.planted_rules = {{"pos", {"alpha"}, {}}};
  spec.keyword_presence["alpha"] = 0.4;
  spec.default_label = "neg";
  spec.seed = 20240810;
  const SyntheticCorpus corpus = generate_synthetic(spec);
  const Dataset data = helpers::make_text_dataset(corpus.documents, corpus.labels, 5, 1, 2);

  ComparisonSetup setup;
  setup.seed = 9;
  setup.measure_memory = false;
  const ComparisonRecord record = compare_runs(data, setup);
  CHECK(record.baseline.report.overall_accuracy >= 0.99);
  CHECK(record.iterative.report.overall_accuracy >= 0.99);
  CHECK(record.baseline.ruleset.size() >= 1);
  CHECK(record.iterative.ruleset.size() >= 1);
  // The iterative leg carries traces, the baseline leg none.
  CHECK_FALSE(record.iterative.traces.empty());
  CHECK(record.baseline.traces.empty());
}

TEST_CASE("peak memory measurement sees a large transient allocation") {
  const auto peak = measure_peak_memory([]() {
    std::vector<char> block(96u << 20);
    for (std::size_t i = 0; i < block.size(); i += 4096) {
      block[i] = static_cast<char>(i);
    }
  });
  if (!peak) {
    MESSAGE("peak memory counters unavailable on this platform; skipping");
    return;
  }
  CHECK(*peak >= (96u << 20));
}

TEST_CASE("measured child runs return their payload and a plausible peak") {
  const MeasuredChildRun child = run_in_child_measured([]() {
    std::vector<char> block(32u << 20, 1);
    return std::string("payload:") + std::to_string(block.size());
  });
  CHECK(child.payload == "payload:" + std::to_string(32u << 20));
  if (child.peak_rss_bytes) {
    CHECK(*child.peak_rss_bytes >= (32u << 20));
  }
}
