#include <doctest.h>

#include <fstream>

#include "config.hpp"
#include "errors.hpp"
#include "test_helpers.hpp"

using namespace rulekit;

namespace {

std::filesystem::path write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
  return path;
}

std::string minimal_config(const std::string& csv_path) {
  return std::string("{\n") + "  \"dataset\": {\"path\": \"" + csv_path + "\"}\n}\n";
}

}  // namespace

TEST_CASE("a full config file parses into the expected values") {
  helpers::TempDir dir("config_full");
  write_file(dir.path() / "data.csv", "text,label\nhello,pos\n");
  const auto config_path = write_file(dir.path() / "run.json", R"({
    "dataset": {"path": "data.csv", "mode": "text", "text_column": "text",
                "label_column": "label", "delimiter": ","},
    "pipeline": {"min_df": 2, "ngram_min": 1, "ngram_max": 2},
    "learner": {"kind": "ripper", "max_conditions": 8, "grow_fraction": 0.7,
                "mdl_slack_bits": 32.0},
    "iteration": {"max_iterations": 4, "voc_threshold": 0.85,
                  "initial_dictionary_fraction": 0.25, "expansion_factor": 2,
                  "patience": 2, "max_rules_per_label": 6},
    "evaluation": {"thresholds": [0.0, 0.9], "test_fraction": 0.25,
                   "validation_fraction": 0.1, "seed": 77},
    "output": {"directory": "results"}
  })");
  const RunConfig config = RunConfig::load(config_path);
  CHECK(config.dataset.mode == DatasetMode::Text);
  CHECK(config.pipeline.vocabulary.min_df == 2);
  CHECK(config.learner.kind == LearnerKindId::Ripper);
  CHECK(config.learner.max_conditions == 8);
  CHECK(config.learner.max_rules_per_label == 6);  // mirrored from iteration
  CHECK(config.iteration.voc_threshold == 0.85);
  CHECK(config.iteration.patience == 2);
  CHECK(config.evaluation.seed == 77);
  CHECK(config.evaluation.thresholds == std::vector<double>{0.0, 0.9});
  CHECK(config.output.directory == "results");
}

TEST_CASE("defaults cover everything but the dataset path") {
  helpers::TempDir dir("config_min");
  write_file(dir.path() / "data.csv", "text,label\nhello,pos\n");
  const RunConfig config =
      RunConfig::load(write_file(dir.path() / "run.json", minimal_config("data.csv")));
  CHECK(config.pipeline.vocabulary.min_df == 5);
  CHECK(config.pipeline.vocabulary.ngram_min == 1);
  CHECK(config.pipeline.vocabulary.ngram_max == 3);
  CHECK(config.learner.kind == LearnerKindId::Foil);
  CHECK(config.iteration.max_iterations == 5);
  CHECK(config.iteration.voc_threshold == 0.9);
  CHECK(config.iteration.initial_dictionary_fraction == doctest::Approx(0.125));
  CHECK(config.iteration.expansion_factor == 2);
  CHECK(config.iteration.max_rules_per_label == 10);
  CHECK(config.evaluation.test_fraction == 0.2);
  CHECK(config.evaluation.validation_fraction == 0.15);
}

TEST_CASE("unknown keys fail fast at every level") {
  helpers::TempDir dir("config_unknown");
  write_file(dir.path() / "data.csv", "text,label\nhello,pos\n");
  const auto check_rejected = [&](const std::string& body) {
    const auto path = write_file(dir.path() / "bad.json", body);
    CHECK_THROWS_AS(RunConfig::load(path), ConfigError);
  };
  check_rejected(R"({"dataset": {"path": "data.csv"}, "surprise": 1})");
  check_rejected(R"({"dataset": {"path": "data.csv", "pathh": "typo.csv"}})");
  check_rejected(R"({"dataset": {"path": "data.csv"}, "learner": {"kinds": "foil"}})");
  check_rejected(R"({"dataset": {"path": "data.csv"}, "iteration": {"voc_treshold": 0.9}})");
}

TEST_CASE("bad values and missing files are config errors") {
  helpers::TempDir dir("config_bad");
  write_file(dir.path() / "data.csv", "text,label\nhello,pos\n");
  const auto check_rejected = [&](const std::string& body) {
    const auto path = write_file(dir.path() / "bad.json", body);
    CHECK_THROWS_AS(RunConfig::load(path), ConfigError);
  };
  CHECK_THROWS_AS(RunConfig::load(dir.path() / "missing.json"), ConfigError);
  check_rejected("{ not json");
  check_rejected(R"({"dataset": {"path": "missing.csv"}})");
  check_rejected(R"({"dataset": {"path": "data.csv", "mode": "audio"}})");
  check_rejected(R"({"dataset": {"path": "data.csv", "mode": "tabular", "text_column": "x"}})");
  check_rejected(R"({"dataset": {"path": "data.csv"}, "learner": {"kind": "c4.5"}})");
  check_rejected(R"({"dataset": {"path": "data.csv"}, "iteration": {"voc_threshold": 1.5}})");
  check_rejected(R"({"dataset": {"path": "data.csv"}, "iteration": {"expansion_factor": 1}})");
  check_rejected(
      R"({"dataset": {"path": "data.csv"}, "iteration": {"initial_dictionary_fraction": 0.0}})");
  check_rejected(R"({"dataset": {"path": "data.csv"}, "evaluation": {"test_fraction": 1.0}})");
  check_rejected(R"({"dataset": {"path": "data.csv"}, "evaluation": {"thresholds": [2.0]}})");
  check_rejected(R"({"dataset": {"path": "data.csv"}, "learner": {"grow_fraction": 1.0}})");
}

TEST_CASE("the config echo is canonical and complete") {
  helpers::TempDir dir("config_echo");
  write_file(dir.path() / "data.csv", "text,label\nhello,pos\n");
  const RunConfig config =
      RunConfig::load(write_file(dir.path() / "run.json", minimal_config("data.csv")));
  const auto echo_a = config.echo().dump(2);
  const auto echo_b = config.echo().dump(2);
  CHECK(echo_a == echo_b);
  CHECK(echo_a.find("\"min_df\": 5") != std::string::npos);
  CHECK(echo_a.find("\"voc_threshold\": 0.9") != std::string::npos);
  CHECK(echo_a.find("\"seed\": 0") != std::string::npos);
}

TEST_CASE("synthetic specs load with defaults and reject unknown keys") {
  helpers::TempDir dir("synth_spec");
  const auto good = write_file(dir.path() / "spec.json", R"({
    "vocabulary_size": 100,
    "document_count": 50,
    "planted_rules": [{"label": "pos", "all_of": ["alpha"], "none_of": ["gamma"]}],
    "keyword_presence": {"alpha": 0.4},
    "default_label": "neg",
    "seed": 4
  })");
  const SyntheticSpec spec = load_synthetic_spec(good);
  CHECK(spec.vocabulary_size == 100);
  CHECK(spec.planted_rules.size() == 1);
  CHECK(spec.planted_rules[0].none_of == std::vector<std::string>{"gamma"});
  CHECK(spec.keyword_presence.at("alpha") == 0.4);
  CHECK(spec.doc_length_min == 8);

  const auto bad = write_file(dir.path() / "bad.json", R"({"vocabulary_sizes": 10})");
  CHECK_THROWS_AS(load_synthetic_spec(bad), ConfigError);
  const auto bad_rule = write_file(dir.path() / "bad_rule.json",
                                   R"({"planted_rules": [{"label": "x", "anyof": []}]})");
  CHECK_THROWS_AS(load_synthetic_spec(bad_rule), ConfigError);
}
