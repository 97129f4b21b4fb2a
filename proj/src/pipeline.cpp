#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "dataset_cache.hpp"
#include "errors.hpp"
#include "loader.hpp"
#include "ruleset_io.hpp"

namespace rulekit {

namespace {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  out << content;
  if (!out) {
    throw DataError("failed writing " + path.string());
  }
}

fs::path out_dir(const RunConfig& config) {
  fs::path dir(config.output.directory);
  fs::create_directories(dir);
  return dir;
}

Dataset prepare_dataset(const RunConfig& config) {
  if (config.dataset.mode == DatasetMode::Text) {
    const TextCorpus corpus = load_text_csv(
        config.dataset.path, {config.dataset.text_column, config.dataset.label_column},
        config.dataset.delimiter);
    auto vocabulary = std::make_shared<Vocabulary>(
        Vocabulary::build(corpus.documents, config.pipeline.vocabulary));
    return Dataset::vectorize(corpus.documents, corpus.labels, std::move(vocabulary));
  }
  return load_tabular_csv(config.dataset.path, config.dataset.label_column,
                          config.dataset.delimiter);
}

Dataset load_or_prepare(const RunConfig& config) {
  const fs::path cache_path = fs::path(config.output.directory) / "dataset.rkds";
  if (fs::exists(cache_path)) {
    return DatasetCache::read(cache_path);
  }
  run_prep(config);
  return DatasetCache::read(cache_path);
}

std::string label_counts_line(const Dataset& data) {
  const std::vector<std::size_t> counts = data.label_counts();
  std::string line;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0) {
      line += ", ";
    }
    line += data.table().labels()[i] + ": " + std::to_string(counts[i]);
  }
  return line;
}

SplitSpec split_spec(const RunConfig& config) {
  SplitSpec spec;
  spec.test_fraction = config.evaluation.test_fraction;
  spec.validation_fraction_of_train = config.evaluation.validation_fraction;
  spec.seed = config.evaluation.seed;
  return spec;
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

// Aligned single-run summary table (learner | memory | accuracy).
std::string format_run_table(const std::string& learner_name, const EvaluationReport& report) {
  std::ostringstream out;
  out << "Learner    Memory (GiB)    Accuracy (%)\n";
  out << learner_name;
  for (std::size_t i = learner_name.size(); i < 11; ++i) out << ' ';
  if (report.peak_memory_bytes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-16.2f",
                  static_cast<double>(*report.peak_memory_bytes) / (1024.0 * 1024.0 * 1024.0));
    out << buf;
  } else {
    out << "n/a             ";
  }
  char acc[16];
  std::snprintf(acc, sizeof acc, "%.2f", 100.0 * report.overall_accuracy);
  out << acc << "\n";
  return out.str();
}

// Threshold-sweep table: predicted / correct / precision / abstained per
// confidence threshold.
std::string format_threshold_table(const EvaluationReport& report) {
  std::ostringstream out;
  const int width = 12;
  out << "Metric      ";
  for (const ThresholdRow& row : report.rows) {
    std::string head = "t=" + format_number(row.threshold);
    out << head;
    for (std::size_t i = head.size(); i < width; ++i) out << ' ';
  }
  out << "\n";
  const auto line = [&](const char* name, auto value_of) {
    out << name;
    for (std::size_t i = std::strlen(name); i < 12; ++i) out << ' ';
    for (const ThresholdRow& row : report.rows) {
      const std::string cell = value_of(row);
      out << cell;
      for (std::size_t i = cell.size(); i < width; ++i) out << ' ';
    }
    out << "\n";
  };
  line("predicted", [](const ThresholdRow& r) { return std::to_string(r.predicted); });
  line("correct", [](const ThresholdRow& r) { return std::to_string(r.correct); });
  line("precision", [](const ThresholdRow& r) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * r.precision);
    return std::string(buf);
  });
  line("abstained", [](const ThresholdRow& r) { return std::to_string(r.abstained); });
  return out.str();
}

}  // namespace

std::string run_prep(const RunConfig& config) {
  const fs::path dir = out_dir(config);
  const Dataset data = prepare_dataset(config);
  DatasetCache::write(data, dir / "dataset.rkds");

  std::string summary;
  if (config.dataset.mode == DatasetMode::Text) {
    const Vocabulary& vocab = data.table().vocabulary();
    vocab.write_tsv(dir / "vocabulary.tsv");
    summary += "vocabulary: " + std::to_string(vocab.size()) + " grams (min_df " +
               std::to_string(vocab.params().min_df) + ", ngrams " +
               std::to_string(vocab.params().ngram_min) + "-" +
               std::to_string(vocab.params().ngram_max) + ")\n";
  } else {
    summary += "attributes: " + std::to_string(data.table().attributes().size()) + "\n";
  }
  summary += "examples: " + std::to_string(data.size()) + "\n";
  summary += "labels: " + label_counts_line(data) + "\n";
  summary += "wrote " + (dir / "dataset.rkds").string() + "\n";
  return summary;
}

std::string run_train(const RunConfig& config, bool iterative) {
  const fs::path dir = out_dir(config);
  const Dataset data = load_or_prepare(config);
  const SplitResult parts = split(data, split_spec(config));

  const auto started = std::chrono::steady_clock::now();
  RuleSet ruleset;
  std::vector<RuleTrace> traces;
  if (iterative) {
    MulticlassResult result = learn_multiclass(parts.train, parts.validation, config.iteration,
                                               config.learner, config.evaluation.seed);
    ruleset = std::move(result.ruleset);
    traces = std::move(result.traces);
  } else {
    std::vector<std::uint32_t> ids(parts.train.row_ids().begin(), parts.train.row_ids().end());
    ids.insert(ids.end(), parts.validation.row_ids().begin(), parts.validation.row_ids().end());
    std::sort(ids.begin(), ids.end());
    const Dataset baseline_train(data.table_ptr(), std::move(ids));
    ruleset = learn_multiclass_baseline(baseline_train, config.learner, config.evaluation.seed);
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  write_ruleset_file(ruleset, dir / "ruleset.rules");
  std::string rendered;
  for (const ScoredRule& scored : ruleset.rules()) {
    rendered += render(scored.rule, ruleset) + "   [voc " + format_number(scored.voc) +
                (scored.accepted ? "" : ", fallback") + "]\n";
  }
  write_text_file(dir / "rules.txt", rendered);
  if (iterative) {
    write_text_file(dir / "trace.txt", format_traces(traces, data.table(), ruleset.target_name()));
  }
  write_text_file(dir / "train_metrics.txt",
                  "wall_seconds " + format_number(wall) + "\nmode " +
                      (iterative ? "iterative" : "baseline") + "\n");

  std::string summary;
  summary += std::string("trained ") + (iterative ? "iterative" : "baseline") + " " +
             (config.learner.kind == LearnerKindId::Foil ? "foil" : "ripper") + ": " +
             std::to_string(ruleset.size()) + " rules\n";
  std::size_t accepted = 0;
  for (const ScoredRule& scored : ruleset.rules()) {
    accepted += scored.accepted ? 1 : 0;
  }
  summary += "accepted: " + std::to_string(accepted) + ", fallback: " +
             std::to_string(ruleset.size() - accepted) + "\n";
  summary += "wrote " + (dir / "ruleset.rules").string() + "\n";
  return summary;
}

std::string run_eval(const RunConfig& config, const std::filesystem::path& ruleset_path) {
  const fs::path dir = out_dir(config);
  const Dataset data = load_or_prepare(config);
  const RuleSet ruleset = read_ruleset_file(ruleset_path);
  const SplitResult parts = split(data, split_spec(config));

  const auto started = std::chrono::steady_clock::now();
  const EvaluationReport report = evaluate(ruleset, parts.test, config.evaluation.thresholds);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const std::string learner_name =
      config.learner.kind == LearnerKindId::Foil ? "foil" : "ripper";
  std::string text_report;
  text_report += format_run_table(learner_name, report);
  text_report += "\n";
  text_report += format_threshold_table(report);
  text_report += "\noverall accuracy (threshold 0, abstentions count as errors): " +
                 percent(report.overall_accuracy) + "\n";
  text_report += "test examples: " + std::to_string(report.total_examples) + "\n";
  write_text_file(dir / "eval_report.txt", text_report);

  nlohmann::ordered_json j;
  j["ruleset"] = ruleset_path.string();
  j["rules"] = ruleset.size();
  j["test_examples"] = report.total_examples;
  j["overall_accuracy"] = report.overall_accuracy;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ThresholdRow& row : report.rows) {
    rows.push_back({{"threshold", row.threshold},
                    {"predicted", row.predicted},
                    {"correct", row.correct},
                    {"precision", row.precision},
                    {"abstained", row.abstained}});
  }
  j["thresholds"] = rows;
  j["config"] = config.echo();
  write_text_file(dir / "eval_report.json", j.dump(2) + "\n");
  write_text_file(dir / "eval_metrics.txt", "wall_seconds " + format_number(wall) + "\n");

  std::ostringstream summary;
  summary << "evaluated " << ruleset.size() << " rules on " << report.total_examples
          << " test examples\n";
  summary << "overall accuracy: " << percent(report.overall_accuracy) << "\n";
  for (const ThresholdRow& row : report.rows) {
    summary << "t=" << format_number(row.threshold) << ": predicted " << row.predicted
            << ", correct " << row.correct << ", precision " << percent(row.precision) << "\n";
  }
  summary << "wrote " << (dir / "eval_report.txt").string() << "\n";
  return summary.str();
}

std::string run_rules(const std::filesystem::path& ruleset_path, double min_voc) {
  const RuleSet ruleset = read_ruleset_file(ruleset_path);
  std::string out;
  for (const ScoredRule& scored : ruleset.rules()) {
    if (scored.voc > min_voc) {
      out += render(scored.rule, ruleset) + "   [voc " + format_number(scored.voc) +
             (scored.accepted ? "" : ", fallback") + "]\n";
    }
  }
  if (out.empty()) {
    out = "(no rules above voc " + format_number(min_voc) + ")\n";
  }
  return out;
}

std::string run_synth(const std::filesystem::path& spec_path,
                      const std::filesystem::path& out_dir_path) {
  const SyntheticSpec spec = load_synthetic_spec(spec_path);
  const SyntheticCorpus corpus = generate_synthetic(spec);
  fs::create_directories(out_dir_path);

  CsvTable table;
  table.header = {"id", "text", "label"};
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    table.rows.push_back({"doc" + std::to_string(i), corpus.documents[i], corpus.labels[i]});
  }
  write_csv(out_dir_path / "corpus.csv", table);

  std::string truth;
  truth += "default_label " + spec.default_label + "\n";
  truth += "label_noise_rate " + format_number(spec.label_noise_rate) + "\n";
  for (const PlantedRule& rule : corpus.ground_truth) {
    truth += "IF ";
    bool first = true;
    for (const std::string& k : rule.all_of) {
      if (!first) truth += " AND ";
      truth += k + " = 1";
      first = false;
    }
    for (const std::string& k : rule.none_of) {
      if (!first) truth += " AND ";
      truth += k + " = 0";
      first = false;
    }
    truth += " THEN Type = " + rule.label + "\n";
  }
  write_text_file(out_dir_path / "ground_truth.txt", truth);

  std::string summary;
  summary += "generated " + std::to_string(corpus.documents.size()) + " documents, " +
             std::to_string(corpus.label_set.size()) + " labels\n";
  summary += "wrote " + (out_dir_path / "corpus.csv").string() + "\n";
  return summary;
}

}  // namespace rulekit
