// Exercises the shared-library surface exactly as an external consumer
// would: only rulekit/rulekit.h, no internal headers.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "rulekit/rulekit.h"

namespace {

namespace fs = std::filesystem;

struct Workspace {
  fs::path root;
  Workspace() {
    root = fs::temp_directory_path() / ("rulekit_capi_" + std::to_string(::getpid()));
    fs::create_directories(root);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("version and error strings are always available") {
  CHECK(rk_version() != nullptr);
  CHECK(rk_last_error() != nullptr);
}

TEST_CASE("opening a missing config yields NULL and a message") {
  rk_config* config = rk_config_open("/nonexistent/run.json");
  CHECK(config == nullptr);
  CHECK(std::strlen(rk_last_error()) > 0);
}

TEST_CASE("config errors carry the config status code") {
  Workspace ws;
  write_file(ws.root / "data.csv", "text,label\nhello,pos\n");
  write_file(ws.root / "bad.json",
             "{\"dataset\": {\"path\": \"data.csv\"}, \"unknown_block\": {}}");
  rk_config* config = rk_config_open((ws.root / "bad.json").string().c_str());
  CHECK(config == nullptr);
  CHECK(std::string(rk_last_error()).find("unknown") != std::string::npos);
}

TEST_CASE("null arguments are invalid-argument errors, not crashes") {
  CHECK(rk_config_set_seed(nullptr, 1) == RK_ERROR_INVALID_ARGUMENT);
  CHECK(rk_config_set_output_dir(nullptr, "x") == RK_ERROR_INVALID_ARGUMENT);
  CHECK(rk_prep(nullptr, nullptr) == RK_ERROR_INVALID_ARGUMENT);
  CHECK(rk_train(nullptr, 1, nullptr) == RK_ERROR_INVALID_ARGUMENT);
  CHECK(rk_eval(nullptr, "x", nullptr) == RK_ERROR_INVALID_ARGUMENT);
  CHECK(rk_synth(nullptr, "x", nullptr) == RK_ERROR_INVALID_ARGUMENT);
  CHECK(rk_ruleset_open(nullptr) == nullptr);
  CHECK(rk_ruleset_size(nullptr) == 0);
  CHECK(rk_ruleset_rule_voc(nullptr, 0) == -1.0);
}

TEST_CASE("the full pipeline runs through the C API") {
  Workspace ws;

  // Synthetic corpus.
  write_file(ws.root / "spec.json", R"({
    "vocabulary_size": 120,
    "document_count": 500,
    "planted_rules": [{"label": "pos", "all_of": ["alpha"], "none_of": []}],
    "keyword_presence": {"alpha": 0.35},
    "default_label": "neg",
    "seed": 99
  })");
  char* summary = nullptr;
  REQUIRE(rk_synth((ws.root / "spec.json").string().c_str(),
                   (ws.root / "synth").string().c_str(), &summary) == RK_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("generated 500 documents") != std::string::npos);
  rk_string_free(summary);

  // Config pointing at the generated corpus.
  write_file(ws.root / "run.json", std::string("{\n") +
                                       "  \"dataset\": {\"path\": \"" +
                                       (ws.root / "synth" / "corpus.csv").string() +
                                       "\"},\n  \"pipeline\": {\"min_df\": 3},\n" +
                                       "  \"evaluation\": {\"seed\": 5},\n" +
                                       "  \"output\": {\"directory\": \"" +
                                       (ws.root / "out").string() + "\"}\n}\n");
  rk_config* config = rk_config_open((ws.root / "run.json").string().c_str());
  REQUIRE(config != nullptr);
  CHECK(rk_config_set_seed(config, 5) == RK_OK);

  summary = nullptr;
  REQUIRE(rk_prep(config, &summary) == RK_OK);
  CHECK(std::string(summary).find("vocabulary:") != std::string::npos);
  rk_string_free(summary);

  summary = nullptr;
  REQUIRE(rk_train(config, /*iterative=*/1, &summary) == RK_OK);
  CHECK(std::string(summary).find("trained iterative foil") != std::string::npos);
  rk_string_free(summary);

  const fs::path ruleset_path = ws.root / "out" / "ruleset.rules";
  REQUIRE(fs::exists(ruleset_path));

  summary = nullptr;
  REQUIRE(rk_eval(config, ruleset_path.string().c_str(), &summary) == RK_OK);
  CHECK(std::string(summary).find("overall accuracy") != std::string::npos);
  rk_string_free(summary);

  // Rule-set handle introspection.
  rk_ruleset* ruleset = rk_ruleset_open(ruleset_path.string().c_str());
  REQUIRE(ruleset != nullptr);
  REQUIRE(rk_ruleset_size(ruleset) >= 1);
  const double voc0 = rk_ruleset_rule_voc(ruleset, 0);
  CHECK(voc0 >= 0.0);
  CHECK(voc0 <= 1.0);
  // Rule-set order is non-increasing confidence.
  for (size_t i = 1; i < rk_ruleset_size(ruleset); ++i) {
    CHECK(rk_ruleset_rule_voc(ruleset, i) <= rk_ruleset_rule_voc(ruleset, i - 1));
  }
  char* text = nullptr;
  REQUIRE(rk_ruleset_render(ruleset, 0.0, &text) == RK_OK);
  CHECK(std::string(text).find("IF alpha = 1 THEN Type = pos") != std::string::npos);
  rk_string_free(text);
  rk_ruleset_close(ruleset);
  rk_config_close(config);
}

TEST_CASE("data errors map to the data status code") {
  Workspace ws;
  write_file(ws.root / "data.csv", "text,label\nhello,pos\nbye,neg\n");
  write_file(ws.root / "run.json", std::string("{\"dataset\": {\"path\": \"") +
                                       (ws.root / "data.csv").string() +
                                       "\"}, \"output\": {\"directory\": \"" +
                                       (ws.root / "out").string() + "\"}}");
  rk_config* config = rk_config_open((ws.root / "run.json").string().c_str());
  REQUIRE(config != nullptr);
  // min_df 5 over a two-document corpus: no gram survives.
  char* summary = nullptr;
  CHECK(rk_prep(config, &summary) == RK_ERROR_DATA);
  CHECK(std::string(rk_last_error()).find("min_df") != std::string::npos);
  rk_config_close(config);

  CHECK(rk_ruleset_open((ws.root / "missing.rules").string().c_str()) == nullptr);
}
