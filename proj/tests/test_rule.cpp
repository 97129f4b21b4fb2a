#include <doctest.h>

#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "test_helpers.hpp"

using namespace rulekit;

namespace {

Dataset imdb_style_dataset() {
  return helpers::make_text_dataset({"bad film", "great film", "bad great film", "film"},
                                    {"neg", "pos", "pos", "pos"});
}

Dataset diabetes_style_dataset() {
  std::vector<AttributeDecl> attrs{{"Insulin", true, {}}, {"BloodPressure", true, {}}};
  std::vector<Row> rows{
      {"r0", 1, {}, {150.0, 75.0}},
      {"r1", 0, {}, {120.0, 75.0}},
      {"r2", 1, {}, {165.0, 72.0}},
      {"r3", 0, {}, {180.0, 90.0}},
  };
  return Dataset(DataTable::tabular(std::move(attrs), {"No", "Yes"}, std::move(rows)));
}

}  // namespace

TEST_CASE("a present/absent conjunction matches exactly when all parts hold") {
  const Dataset data = imdb_style_dataset();
  const std::uint32_t bad = helpers::rank_of(data, "bad");
  const std::uint32_t great = helpers::rank_of(data, "great");

  const Rule rule{0, {{bad, ConditionOp::Present, 0, 0}, {great, ConditionOp::Absent, 0, 0}}};
  CHECK(matches(rule, data, 0));        // "bad film"
  CHECK_FALSE(matches(rule, data, 1));  // "great film"
  CHECK_FALSE(matches(rule, data, 2));  // "bad great film": great present
  CHECK_FALSE(matches(rule, data, 3));  // "film": bad missing
}

TEST_CASE("an unmet presence condition fails the match") {
  const Dataset data = imdb_style_dataset();
  const Rule rule{0, {{helpers::rank_of(data, "bad"), ConditionOp::Present, 0, 0}}};
  CHECK_FALSE(matches(rule, data, 3));
}

TEST_CASE("interval membership via a le/ge pair") {
  const Dataset data = diabetes_style_dataset();
  const Rule rule{1,
                  {{0, ConditionOp::GreaterEqual, 140.0, 0}, {0, ConditionOp::LessEqual, 170.0, 0}}};
  CHECK(matches(rule, data, 0));        // 150
  CHECK_FALSE(matches(rule, data, 1));  // 120
  CHECK(matches(rule, data, 2));        // 165
  CHECK_FALSE(matches(rule, data, 3));  // 180
}

TEST_CASE("a condition on a missing attribute is a schema mismatch") {
  const Dataset text = imdb_style_dataset();
  const std::uint32_t v = static_cast<std::uint32_t>(text.table().vocabulary().size());
  const Rule beyond{0, {{v + 3, ConditionOp::Present, 0, 0}}};
  CHECK_THROWS_AS(matches(beyond, text, 0), SchemaMismatchError);

  const Dataset tabular = diabetes_style_dataset();
  const Rule wrong_kind{0, {{0, ConditionOp::Present, 0, 0}}};
  CHECK_THROWS_AS(matches(wrong_kind, tabular, 0), SchemaMismatchError);
  const Rule beyond_attr{0, {{9, ConditionOp::LessEqual, 1.0, 0}}};
  CHECK_THROWS_AS(matches(beyond_attr, tabular, 0), SchemaMismatchError);
}

TEST_CASE("coverage of a rule matching nothing is (0, 0)") {
  const Dataset data = imdb_style_dataset();
  // "bad" and "great" together never co-occur with "bad" absent.
  const Rule rule{0,
                  {{helpers::rank_of(data, "bad"), ConditionOp::Present, 0, 0},
                   {helpers::rank_of(data, "film"), ConditionOp::Absent, 0, 0}}};
  const Coverage cov = coverage(rule, data, 0);
  CHECK(cov.positives == 0);
  CHECK(cov.negatives == 0);
}

TEST_CASE("coverage counts positives and negatives by construction") {
  std::vector<std::string> docs;
  std::vector<std::string> labels;
  for (int i = 0; i < 10; ++i) {
    docs.push_back("alpha x" + std::to_string(i));
    labels.push_back("pos");
  }
  docs.push_back("alpha");
  labels.push_back("neg");
  docs.push_back("beta");
  labels.push_back("neg");
  const Dataset data = helpers::make_text_dataset(docs, labels);
  const Rule rule{helpers::label_id(data, "pos"),
                  {{helpers::rank_of(data, "alpha"), ConditionOp::Present, 0, 0}}};
  const Coverage cov = coverage(rule, data, helpers::label_id(data, "pos"));
  CHECK(cov.positives == 10);
  CHECK(cov.negatives == 1);
}

TEST_CASE("coverage equals a naive per-example loop on random data") {
  Rng rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const Dataset data = helpers::random_text_dataset(10, 50, 0.35, 1000 + trial);
    Rule rule;
    rule.label = 0;
    const std::uint32_t n_conds = 1 + static_cast<std::uint32_t>(rng.below(3));
    std::vector<std::uint32_t> attrs(data.feature_limit());
    for (std::uint32_t i = 0; i < attrs.size(); ++i) attrs[i] = i;
    shuffle(attrs, rng);
    for (std::uint32_t c = 0; c < n_conds; ++c) {
      rule.conditions.push_back(
          {attrs[c], rng.unit() < 0.5 ? ConditionOp::Present : ConditionOp::Absent, 0, 0});
    }
    const auto [p, n] = oracles::naive_coverage(rule, data, 0);
    const Coverage cov = coverage(rule, data, 0);
    CHECK(cov.positives == p);
    CHECK(cov.negatives == n);
  }
}

TEST_CASE("contradictory conjunctions are rejected") {
  CHECK_THROWS_AS(validate_rule(Rule{0, {}}), DataError);
  CHECK_THROWS_AS(validate_rule(Rule{0,
                                     {{3, ConditionOp::Present, 0, 0},
                                      {3, ConditionOp::Absent, 0, 0}}}),
                  DataError);
  CHECK_THROWS_AS(validate_rule(Rule{0,
                                     {{1, ConditionOp::Equals, 0, 2},
                                      {1, ConditionOp::Equals, 0, 3}}}),
                  DataError);
  CHECK_THROWS_AS(validate_rule(Rule{0,
                                     {{0, ConditionOp::LessEqual, 1.0, 0},
                                      {0, ConditionOp::GreaterEqual, 2.0, 0}}}),
                  DataError);
  CHECK_NOTHROW(validate_rule(Rule{0,
                                   {{0, ConditionOp::GreaterEqual, 1.0, 0},
                                    {0, ConditionOp::LessEqual, 2.0, 0}}}));
}

namespace {

RuleSet two_rule_set(const Dataset& data, double voc_a, double voc_b) {
  RuleSet ruleset(DatasetMode::Text, data.table().schema_fingerprint(), data.table().labels(),
                  "Type");
  ScoredRule r1;
  r1.rule = Rule{helpers::label_id(data, "pos"),
                 {{helpers::rank_of(data, "film"), ConditionOp::Present, 0, 0}}};
  r1.voc = voc_a;
  r1.accepted = true;
  ScoredRule r2;
  r2.rule = Rule{helpers::label_id(data, "neg"),
                 {{helpers::rank_of(data, "bad"), ConditionOp::Present, 0, 0}}};
  r2.voc = voc_b;
  r2.accepted = true;
  ruleset.add(r1);
  ruleset.add(r2);
  ruleset.bind_names_from(data.table());
  ruleset.finalize();
  return ruleset;
}

}  // namespace

TEST_CASE("prediction abstains when no rule fires") {
  const Dataset data = imdb_style_dataset();
  RuleSet ruleset(DatasetMode::Text, data.table().schema_fingerprint(), data.table().labels(),
                  "Type");
  ScoredRule r;
  r.rule = Rule{0, {{helpers::rank_of(data, "great"), ConditionOp::Present, 0, 0}}};
  r.voc = 1.0;
  ruleset.add(r);
  ruleset.finalize();
  CHECK_FALSE(predict(ruleset, data, 0, 0.0).has_value());  // "bad film"
}

TEST_CASE("prediction takes the highest-confidence rule above the threshold") {
  const Dataset data = imdb_style_dataset();
  // Both rules fire on "bad great film" (row 2): film=present (voc .95, pos)
  // and bad=present (voc .80, neg). At threshold .9 only the first counts.
  const RuleSet ruleset = two_rule_set(data, 0.95, 0.80);
  const auto at_09 = predict(ruleset, data, 2, 0.9);
  REQUIRE(at_09.has_value());
  CHECK(*at_09 == helpers::label_id(data, "pos"));
  // At threshold 0 the .95 rule still wins by ordering.
  const auto at_0 = predict(ruleset, data, 2, 0.0);
  REQUIRE(at_0.has_value());
  CHECK(*at_0 == helpers::label_id(data, "pos"));
}

TEST_CASE("prediction order breaks confidence ties by learning order") {
  const Dataset data = imdb_style_dataset();
  const RuleSet ruleset = two_rule_set(data, 0.9, 0.9);
  const auto got = predict(ruleset, data, 2, 0.0);
  REQUIRE(got.has_value());
  CHECK(*got == helpers::label_id(data, "pos"));  // learned first
}

TEST_CASE("raising the threshold never adds predictions") {
  Rng rng(41);
  const Dataset data = helpers::random_text_dataset(8, 60, 0.4, 4242);
  RuleSet ruleset(DatasetMode::Text, data.table().schema_fingerprint(), data.table().labels(),
                  "Type");
  for (int r = 0; r < 6; ++r) {
    ScoredRule scored;
    scored.rule.label = static_cast<std::uint32_t>(rng.below(2));
    scored.rule.conditions.push_back({static_cast<std::uint32_t>(rng.below(8)),
                                      rng.unit() < 0.5 ? ConditionOp::Present : ConditionOp::Absent,
                                      0, 0});
    scored.voc = rng.unit();
    ruleset.add(scored);
  }
  ruleset.finalize();

  std::size_t previous = data.size() + 1;
  for (double t : {0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.99}) {
    std::size_t predicted = 0;
    for (std::uint32_t i = 0; i < data.size(); ++i) {
      predicted += predict(ruleset, data, i, t).has_value() ? 1 : 0;
    }
    CHECK(predicted <= previous);
    previous = predicted;
  }
}

TEST_CASE("prediction on a foreign schema is rejected") {
  const Dataset data = imdb_style_dataset();
  const Dataset other = helpers::make_text_dataset({"zzz yyy"}, {"pos"});
  const RuleSet ruleset = two_rule_set(data, 0.9, 0.8);
  CHECK_THROWS_AS(predict(ruleset, other, 0, 0.0), SchemaMismatchError);
}

TEST_CASE("rules render in the report surface style") {
  const Dataset data = helpers::make_text_dataset(
      {"dumb tweet", "monkey cute zoo", "plain words"},
      {"Hate Speech", "NOT Hate Speech", "NOT Hate Speech"});
  RuleSet ruleset(DatasetMode::Text, data.table().schema_fingerprint(), data.table().labels(),
                  "Type");
  ScoredRule hate;
  hate.rule = Rule{helpers::label_id(data, "Hate Speech"),
                   {{helpers::rank_of(data, "dumb"), ConditionOp::Present, 0, 0}}};
  hate.voc = 1.0;
  ScoredRule not_hate;
  not_hate.rule = Rule{helpers::label_id(data, "NOT Hate Speech"),
                       {{helpers::rank_of(data, "monkey"), ConditionOp::Present, 0, 0},
                        {helpers::rank_of(data, "cute"), ConditionOp::Present, 0, 0}}};
  not_hate.voc = 1.0;
  ruleset.add(hate);
  ruleset.add(not_hate);
  ruleset.bind_names_from(data.table());
  ruleset.finalize();

  CHECK(render(ruleset.rules()[0].rule, ruleset) == "IF dumb = 1 THEN Type = Hate Speech");
  CHECK(render(ruleset.rules()[1].rule, ruleset) ==
        "IF monkey = 1 AND cute = 1 THEN Type = NOT Hate Speech");
}

TEST_CASE("numeric rules render with bare thresholds") {
  const Dataset data = diabetes_style_dataset();
  RuleSet ruleset(DatasetMode::Tabular, data.table().schema_fingerprint(), data.table().labels(),
                  "Diabetes");
  ScoredRule r;
  r.rule = Rule{helpers::label_id(data, "Yes"),
                {{0, ConditionOp::GreaterEqual, 140.0, 0}, {0, ConditionOp::LessEqual, 170.0, 0}}};
  r.voc = 1.0;
  ruleset.add(r);
  ruleset.bind_names_from(data.table());
  ruleset.finalize();
  CHECK(render(ruleset.rules()[0].rule, ruleset) ==
        "IF Insulin >= 140 AND Insulin <= 170 THEN Diabetes = Yes");
}

TEST_CASE("nominal equals conditions render the symbol") {
  std::vector<AttributeDecl> attrs{{"color", false, {"blue", "red"}}};
  std::vector<Row> rows{{"r0", 0, {}, {1.0}}, {"r1", 1, {}, {0.0}}};
  const Dataset data(DataTable::tabular(std::move(attrs), {"no", "yes"}, std::move(rows)));
  RuleSet ruleset(DatasetMode::Tabular, data.table().schema_fingerprint(), data.table().labels(),
                  "outcome");
  ScoredRule r;
  r.rule = Rule{0, {{0, ConditionOp::Equals, 0, 1}}};
  r.voc = 0.5;
  ruleset.add(r);
  ruleset.bind_names_from(data.table());
  ruleset.finalize();
  CHECK(render(ruleset.rules()[0].rule, ruleset) == "IF color = red THEN outcome = no");
}

TEST_CASE("rules with validation confidence 1 predict with precision 1 on that validation set") {
  const Dataset data = helpers::make_text_dataset(
      {"alpha one", "alpha two", "beta one", "beta two"}, {"pos", "pos", "neg", "neg"});
  RuleSet ruleset(DatasetMode::Text, data.table().schema_fingerprint(), data.table().labels(),
                  "Type");
  const auto add_rule = [&](const std::string& gram, const std::string& label) {
    ScoredRule scored;
    scored.rule = Rule{helpers::label_id(data, label),
                       {{helpers::rank_of(data, gram), ConditionOp::Present, 0, 0}}};
    const Coverage cov = coverage(scored.rule, data, scored.rule.label);
    REQUIRE(cov.positives > 0);
    REQUIRE(cov.negatives == 0);
    scored.voc = 1.0;  // p / (p + n) with n = 0
    scored.accepted = true;
    ruleset.add(scored);
  };
  add_rule("alpha", "pos");
  add_rule("beta", "neg");
  ruleset.finalize();

  std::uint64_t predicted = 0, correct = 0;
  for (std::uint32_t i = 0; i < data.size(); ++i) {
    if (const auto label = predict(ruleset, data, i, 0.0)) {
      ++predicted;
      correct += *label == data.label(i) ? 1 : 0;
    }
  }
  REQUIRE(predicted > 0);
  CHECK(predicted == correct);
}
