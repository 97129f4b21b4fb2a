// rulekit command-line driver. Talks to the core exclusively through the C
// API in rulekit/rulekit.h, which is also what keeps that API honest.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "rulekit/rulekit.h"

namespace {

struct ConfigCloser {
  void operator()(rk_config* c) const { rk_config_close(c); }
};
using ConfigHandle = std::unique_ptr<rk_config, ConfigCloser>;

struct RulesetCloser {
  void operator()(rk_ruleset* r) const { rk_ruleset_close(r); }
};
using RulesetHandle = std::unique_ptr<rk_ruleset, RulesetCloser>;

int fail(rk_status status) {
  std::fprintf(stderr, "error: %s\n", rk_last_error());
  return static_cast<int>(status);
}

int print_summary(rk_status status, char* summary) {
  if (status != RK_OK) {
    rk_string_free(summary);
    return fail(status);
  }
  if (summary) {
    std::fputs(summary, stdout);
    rk_string_free(summary);
  }
  return 0;
}

ConfigHandle open_config(const std::string& path, bool seed_set, std::uint64_t seed,
                         const std::string& out_dir) {
  ConfigHandle config(rk_config_open(path.c_str()));
  if (!config) {
    return config;
  }
  if (seed_set) {
    rk_config_set_seed(config.get(), seed);
  }
  if (!out_dir.empty()) {
    rk_config_set_output_dir(config.get(), out_dir.c_str());
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rulekit - if-then rule induction with confidence-gated iterative learning"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--config", config_path, "experiment config file (JSON)");
  app.add_option("--out", out_dir, "override the output directory");
  app.add_option("--seed", seed, "override the experiment seed")->each([&](const std::string&) {
    seed_set = true;
  });

  CLI::App* prep = app.add_subcommand("prep", "build the vocabulary and dataset cache");

  CLI::App* train = app.add_subcommand("train", "learn a rule set");
  bool baseline = false;
  bool iterative = false;
  train->add_flag("--baseline", baseline, "plain learner on the full training data");
  train->add_flag("--iterative", iterative, "confidence-gated iterative learning (default)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a rule set on the test split");
  std::string ruleset_path;
  eval->add_option("ruleset", ruleset_path, "rule-set file")->required();

  CLI::App* rules = app.add_subcommand("rules", "print rules from a rule-set file");
  std::string rules_path;
  double min_voc = 0.0;
  rules->add_option("ruleset", rules_path, "rule-set file")->required();
  rules->add_option("--min-voc", min_voc, "only rules with confidence strictly above this");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  std::string spec_path;
  synth->add_option("spec", spec_path, "synthetic spec file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(RK_ERROR_CONFIG);
  }

  const auto need_config = [&]() -> ConfigHandle {
    if (config_path.empty()) {
      std::fprintf(stderr, "error: --config is required for this command\n");
      return ConfigHandle();
    }
    ConfigHandle config = open_config(config_path, seed_set, seed, out_dir);
    if (!config) {
      std::fprintf(stderr, "error: %s\n", rk_last_error());
    }
    return config;
  };

  if (prep->parsed()) {
    ConfigHandle config = need_config();
    if (!config) return static_cast<int>(RK_ERROR_CONFIG);
    char* summary = nullptr;
    return print_summary(rk_prep(config.get(), &summary), summary);
  }
  if (train->parsed()) {
    if (baseline && iterative) {
      std::fprintf(stderr, "error: choose one of --baseline / --iterative\n");
      return static_cast<int>(RK_ERROR_CONFIG);
    }
    ConfigHandle config = need_config();
    if (!config) return static_cast<int>(RK_ERROR_CONFIG);
    char* summary = nullptr;
    return print_summary(rk_train(config.get(), baseline ? 0 : 1, &summary), summary);
  }
  if (eval->parsed()) {
    ConfigHandle config = need_config();
    if (!config) return static_cast<int>(RK_ERROR_CONFIG);
    char* summary = nullptr;
    return print_summary(rk_eval(config.get(), ruleset_path.c_str(), &summary), summary);
  }
  if (rules->parsed()) {
    RulesetHandle ruleset(rk_ruleset_open(rules_path.c_str()));
    if (!ruleset) {
      return fail(RK_ERROR_DATA);
    }
    char* text = nullptr;
    return print_summary(rk_ruleset_render(ruleset.get(), min_voc, &text), text);
  }
  if (synth->parsed()) {
    char* summary = nullptr;
    const char* dir = out_dir.empty() ? "out" : out_dir.c_str();
    return print_summary(rk_synth(spec_path.c_str(), dir, &summary), summary);
  }
  return static_cast<int>(RK_ERROR_CONFIG);
}
