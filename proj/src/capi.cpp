#include "rulekit/rulekit.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "pipeline.hpp"
#include "rule.hpp"
#include "ruleset_io.hpp"

struct rk_config {
  rulekit::RunConfig config;
};

struct rk_ruleset {
  rulekit::RuleSet ruleset;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

rk_status status_of(const rulekit::Error& e) {
  switch (e.kind()) {
    case rulekit::ErrorKind::Config: return RK_ERROR_CONFIG;
    case rulekit::ErrorKind::Data: return RK_ERROR_DATA;
    case rulekit::ErrorKind::Learner: return RK_ERROR_LEARNER;
  }
  return RK_ERROR_DATA;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) {
    std::memcpy(out, s.c_str(), s.size() + 1);
  }
  return out;
}

// Runs `fn` (returning the summary string), mapping exceptions to status
// codes and storing the summary into *out.
template <typename Fn>
rk_status guarded(char** out, Fn&& fn) {
  try {
    const std::string summary = fn();
    if (out) {
      *out = dup_string(summary);
    }
    return RK_OK;
  } catch (const rulekit::Error& e) {
    set_error(e.what());
    return status_of(e);
  } catch (const std::exception& e) {
    set_error(e.what());
    return RK_ERROR_DATA;
  }
}

}  // namespace

extern "C" {

const char* rk_version(void) { return "0.1.0"; }

const char* rk_last_error(void) { return g_last_error.c_str(); }

void rk_string_free(char* s) { std::free(s); }

rk_config* rk_config_open(const char* path) {
  if (!path) {
    set_error("rk_config_open: path is NULL");
    return nullptr;
  }
  try {
    auto* handle = new rk_config{rulekit::RunConfig::load(path)};
    return handle;
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void rk_config_close(rk_config* config) { delete config; }

rk_status rk_config_set_seed(rk_config* config, uint64_t seed) {
  if (!config) {
    set_error("rk_config_set_seed: config is NULL");
    return RK_ERROR_INVALID_ARGUMENT;
  }
  config->config.evaluation.seed = seed;
  return RK_OK;
}

rk_status rk_config_set_output_dir(rk_config* config, const char* directory) {
  if (!config || !directory) {
    set_error("rk_config_set_output_dir: NULL argument");
    return RK_ERROR_INVALID_ARGUMENT;
  }
  config->config.output.directory = directory;
  return RK_OK;
}

rk_status rk_prep(const rk_config* config, char** summary) {
  if (!config) {
    set_error("rk_prep: config is NULL");
    return RK_ERROR_INVALID_ARGUMENT;
  }
  return guarded(summary, [&]() { return rulekit::run_prep(config->config); });
}

rk_status rk_train(const rk_config* config, int iterative, char** summary) {
  if (!config) {
    set_error("rk_train: config is NULL");
    return RK_ERROR_INVALID_ARGUMENT;
  }
  return guarded(summary, [&]() { return rulekit::run_train(config->config, iterative != 0); });
}

rk_status rk_eval(const rk_config* config, const char* ruleset_path, char** summary) {
  if (!config || !ruleset_path) {
    set_error("rk_eval: NULL argument");
    return RK_ERROR_INVALID_ARGUMENT;
  }
  return guarded(summary, [&]() { return rulekit::run_eval(config->config, ruleset_path); });
}

rk_status rk_synth(const char* spec_path, const char* out_dir, char** summary) {
  if (!spec_path || !out_dir) {
    set_error("rk_synth: NULL argument");
    return RK_ERROR_INVALID_ARGUMENT;
  }
  return guarded(summary, [&]() { return rulekit::run_synth(spec_path, out_dir); });
}

rk_ruleset* rk_ruleset_open(const char* path) {
  if (!path) {
    set_error("rk_ruleset_open: path is NULL");
    return nullptr;
  }
  try {
    return new rk_ruleset{rulekit::read_ruleset_file(path)};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void rk_ruleset_close(rk_ruleset* ruleset) { delete ruleset; }

size_t rk_ruleset_size(const rk_ruleset* ruleset) {
  return ruleset ? ruleset->ruleset.size() : 0;
}

double rk_ruleset_rule_voc(const rk_ruleset* ruleset, size_t index) {
  if (!ruleset || index >= ruleset->ruleset.size()) {
    set_error("rk_ruleset_rule_voc: bad handle or index");
    return -1.0;
  }
  return ruleset->ruleset.rules()[index].voc;
}

rk_status rk_ruleset_render(const rk_ruleset* ruleset, double min_voc, char** text) {
  if (!ruleset || !text) {
    set_error("rk_ruleset_render: NULL argument");
    return RK_ERROR_INVALID_ARGUMENT;
  }
  return guarded(text, [&]() {
    std::string out;
    for (const rulekit::ScoredRule& scored : ruleset->ruleset.rules()) {
      if (scored.voc > min_voc) {
        out += rulekit::render(scored.rule, ruleset->ruleset) + "   [voc " +
               rulekit::format_number(scored.voc) + (scored.accepted ? "" : ", fallback") + "]\n";
      }
    }
    return out;
  });
}

}  // extern "C"
