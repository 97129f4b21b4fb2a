#include "config.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace rulekit {

namespace {

using nlohmann::json;

json parse_json_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(std::string("cannot open ") + what + " file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + " file " + path.string() + ": " + e.what());
  }
}

// Wraps a JSON object and tracks which keys were consumed; leftover keys are
// a hard error.
class StrictObject {
 public:
  StrictObject(const json& object, std::string context) : object_(object), context_(std::move(context)) {
    if (!object_.is_object()) {
      throw ConfigError(context_ + " must be a JSON object");
    }
  }

  bool has(const char* key) {
    consumed_.push_back(key);
    return object_.contains(key);
  }

  template <typename T>
  T get(const char* key, T fallback) {
    if (!has(key)) {
      return fallback;
    }
    try {
      return object_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(context_ + "." + key + " has the wrong type");
    }
  }

  std::string require_string(const char* key) {
    if (!has(key)) {
      throw ConfigError(context_ + " is missing required key \"" + key + "\"");
    }
    try {
      return object_.at(key).get<std::string>();
    } catch (const json::exception&) {
      throw ConfigError(context_ + "." + key + " must be a string");
    }
  }

  const json* optional_raw(const char* key) {
    return has(key) ? &object_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      (void)value;
      if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end()) {
        throw ConfigError(context_ + " has unknown key \"" + key + "\"");
      }
    }
  }

 private:
  const json& object_;
  std::string context_;
  std::vector<std::string> consumed_;
};

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::filesystem::path& base_dir) {
  json root_json;
  try {
    root_json = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  StrictObject root(root_json, "config");
  RunConfig config;

  if (const json* block = root.optional_raw("dataset")) {
    StrictObject dataset(*block, "dataset");
    config.dataset.path = dataset.require_string("path");
    const std::string mode = dataset.get<std::string>("mode", "text");
    if (mode == "text") {
      config.dataset.mode = DatasetMode::Text;
      config.dataset.text_column = dataset.get<std::string>("text_column", "text");
    } else if (mode == "tabular") {
      config.dataset.mode = DatasetMode::Tabular;
      if (dataset.has("text_column")) {
        throw ConfigError("dataset.text_column has no meaning in tabular mode");
      }
    } else {
      throw ConfigError("dataset.mode must be \"text\" or \"tabular\"");
    }
    config.dataset.label_column = dataset.get<std::string>("label_column", "label");
    const std::string delimiter = dataset.get<std::string>("delimiter", ",");
    if (delimiter.size() != 1) {
      throw ConfigError("dataset.delimiter must be a single character");
    }
    config.dataset.delimiter = delimiter[0];
    dataset.finish();

    std::filesystem::path data_path(config.dataset.path);
    if (data_path.is_relative()) {
      data_path = base_dir / data_path;
    }
    config.dataset.path = data_path.string();
    if (!std::filesystem::exists(data_path)) {
      throw ConfigError("dataset.path does not exist: " + data_path.string());
    }
  } else {
    throw ConfigError("config is missing the dataset block");
  }

  if (const json* block = root.optional_raw("pipeline")) {
    StrictObject pipeline(*block, "pipeline");
    config.pipeline.vocabulary.min_df = pipeline.get<std::uint32_t>("min_df", 5);
    config.pipeline.vocabulary.ngram_min = pipeline.get<int>("ngram_min", 1);
    config.pipeline.vocabulary.ngram_max = pipeline.get<int>("ngram_max", 3);
    pipeline.finish();
    if (config.pipeline.vocabulary.min_df < 1) {
      throw ConfigError("pipeline.min_df must be at least 1");
    }
    if (config.pipeline.vocabulary.ngram_min < 1 || config.pipeline.vocabulary.ngram_max > 3 ||
        config.pipeline.vocabulary.ngram_min > config.pipeline.vocabulary.ngram_max) {
      throw ConfigError("pipeline ngram range must satisfy 1 <= min <= max <= 3");
    }
  }

  if (const json* block = root.optional_raw("learner")) {
    StrictObject learner(*block, "learner");
    const std::string kind = learner.get<std::string>("kind", "foil");
    if (kind == "foil") {
      config.learner.kind = LearnerKindId::Foil;
    } else if (kind == "ripper") {
      config.learner.kind = LearnerKindId::Ripper;
    } else {
      throw ConfigError("learner.kind must be \"foil\" or \"ripper\"");
    }
    config.learner.max_conditions = learner.get<std::uint32_t>("max_conditions", 16);
    config.learner.grow_fraction = learner.get<double>("grow_fraction", 2.0 / 3.0);
    config.learner.mdl_slack_bits = learner.get<double>("mdl_slack_bits", 64.0);
    learner.finish();
  }

  if (const json* block = root.optional_raw("iteration")) {
    StrictObject iteration(*block, "iteration");
    config.iteration.max_iterations = iteration.get<std::uint32_t>("max_iterations", 5);
    config.iteration.voc_threshold = iteration.get<double>("voc_threshold", 0.9);
    config.iteration.initial_dictionary_fraction =
        iteration.get<double>("initial_dictionary_fraction", 1.0 / 8.0);
    config.iteration.expansion_factor = iteration.get<std::uint32_t>("expansion_factor", 2);
    config.iteration.patience = iteration.get<std::uint32_t>("patience", 3);
    config.iteration.max_rules_per_label = iteration.get<std::uint32_t>("max_rules_per_label", 10);
    iteration.finish();
  }
  config.learner.max_rules_per_label = config.iteration.max_rules_per_label;

  if (const json* block = root.optional_raw("evaluation")) {
    StrictObject evaluation(*block, "evaluation");
    config.evaluation.thresholds =
        evaluation.get<std::vector<double>>("thresholds", {0.0, 0.6, 0.7, 0.8, 0.9});
    config.evaluation.test_fraction = evaluation.get<double>("test_fraction", 0.2);
    config.evaluation.validation_fraction = evaluation.get<double>("validation_fraction", 0.15);
    config.evaluation.seed = evaluation.get<std::uint64_t>("seed", 0);
    evaluation.finish();
    if (!(config.evaluation.test_fraction > 0.0 && config.evaluation.test_fraction < 1.0) ||
        !(config.evaluation.validation_fraction > 0.0 &&
          config.evaluation.validation_fraction < 1.0)) {
      throw ConfigError("evaluation fractions must lie in (0, 1)");
    }
    for (double t : config.evaluation.thresholds) {
      if (!(t >= 0.0 && t <= 1.0)) {
        throw ConfigError("evaluation.thresholds must lie in [0, 1]");
      }
    }
  }

  if (const json* block = root.optional_raw("output")) {
    StrictObject output(*block, "output");
    config.output.directory = output.get<std::string>("directory", "out");
    output.finish();
  }
  root.finish();

  try {
    validate_options(config.learner);
    validate_iteration_config(config.iteration);
  } catch (const ConfigError&) {
    throw;
  }
  return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.has_parent_path() ? path.parent_path() : ".");
}

nlohmann::ordered_json RunConfig::echo() const {
  nlohmann::ordered_json j;
  j["dataset"] = {{"path", dataset.path},
                  {"mode", dataset.mode == DatasetMode::Text ? "text" : "tabular"},
                  {"label_column", dataset.label_column},
                  {"delimiter", std::string(1, dataset.delimiter)}};
  if (dataset.mode == DatasetMode::Text) {
    j["dataset"]["text_column"] = dataset.text_column;
  }
  j["pipeline"] = {{"min_df", pipeline.vocabulary.min_df},
                   {"ngram_min", pipeline.vocabulary.ngram_min},
                   {"ngram_max", pipeline.vocabulary.ngram_max}};
  j["learner"] = {{"kind", learner.kind == LearnerKindId::Foil ? "foil" : "ripper"},
                  {"max_conditions", learner.max_conditions},
                  {"grow_fraction", learner.grow_fraction},
                  {"mdl_slack_bits", learner.mdl_slack_bits}};
  j["iteration"] = {{"max_iterations", iteration.max_iterations},
                    {"voc_threshold", iteration.voc_threshold},
                    {"initial_dictionary_fraction", iteration.initial_dictionary_fraction},
                    {"expansion_factor", iteration.expansion_factor},
                    {"patience", iteration.patience},
                    {"max_rules_per_label", iteration.max_rules_per_label}};
  j["evaluation"] = {{"thresholds", evaluation.thresholds},
                     {"test_fraction", evaluation.test_fraction},
                     {"validation_fraction", evaluation.validation_fraction},
                     {"seed", evaluation.seed}};
  j["output"] = {{"directory", output.directory}};
  return j;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  const json root_json = parse_json_file(path, "synthetic spec");
  StrictObject root(root_json, "synthetic spec");
  SyntheticSpec spec;
  spec.vocabulary_size = root.get<std::uint32_t>("vocabulary_size", 500);
  spec.document_count = root.get<std::uint32_t>("document_count", 1000);
  spec.doc_length_min = root.get<std::uint32_t>("doc_length_min", 8);
  spec.doc_length_max = root.get<std::uint32_t>("doc_length_max", 25);
  spec.zipf_exponent = root.get<double>("zipf_exponent", 1.1);
  spec.default_label = root.get<std::string>("default_label", "none");
  spec.label_noise_rate = root.get<double>("label_noise_rate", 0.0);
  spec.seed = root.get<std::uint64_t>("seed", 0);
  if (const json* rules = root.optional_raw("planted_rules")) {
    if (!rules->is_array()) {
      throw InvalidSpecError("planted_rules must be an array");
    }
    for (const json& rule_json : *rules) {
      StrictObject rule(rule_json, "planted rule");
      PlantedRule planted;
      planted.label = rule.require_string("label");
      planted.all_of = rule.get<std::vector<std::string>>("all_of", {});
      planted.none_of = rule.get<std::vector<std::string>>("none_of", {});
      rule.finish();
      spec.planted_rules.push_back(std::move(planted));
    }
  }
  if (const json* presence = root.optional_raw("keyword_presence")) {
    if (!presence->is_object()) {
      throw InvalidSpecError("keyword_presence must be an object");
    }
    for (const auto& [keyword, prob] : presence->items()) {
      if (!prob.is_number()) {
        throw InvalidSpecError("keyword_presence values must be numbers");
      }
      spec.keyword_presence[keyword] = prob.get<double>();
    }
  }
  root.finish();
  return spec;
}

}  // namespace rulekit
