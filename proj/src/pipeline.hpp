#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace rulekit {

// The five CLI-facing operations. Each writes its artifacts under the
// config's output directory and returns a short human-readable summary.
// Artifacts that must be byte-identical across reruns (rule sets, reports)
// never contain timing or memory numbers; those live in the *_metrics.txt
// sidecars.

// CSV -> vocabulary.tsv + dataset.rkds. Idempotent; the summary reports the
// vocabulary size and per-label counts.
std::string run_prep(const RunConfig& config);

// Prepared dataset -> ruleset.rules + rules.txt (+ trace.txt when
// iterative) + train_metrics.txt. Runs prep first when the cache is absent.
std::string run_train(const RunConfig& config, bool iterative);

// Ruleset + test split -> eval_report.txt + eval_report.json +
// eval_metrics.txt.
std::string run_eval(const RunConfig& config, const std::filesystem::path& ruleset_path);

// Rendered rules above a confidence filter, in rule-set order.
std::string run_rules(const std::filesystem::path& ruleset_path, double min_voc);

// Synthetic spec -> corpus.csv + ground_truth.txt under out_dir.
std::string run_synth(const std::filesystem::path& spec_path,
                      const std::filesystem::path& out_dir);

}  // namespace rulekit
