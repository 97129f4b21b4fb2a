#pragma once

#include <filesystem>
#include <string>

#include "rule.hpp"

namespace rulekit {

// Rule-set file format, version 1. Line-oriented text; tokens are separated
// by single spaces and strings are double-quoted with \" \\ \n \t escapes.
// The grammar is documented in docs/formats.md. Round-trips are lossless:
// confidence values are written in shortest round-trip decimal form.
std::string serialize_ruleset(const RuleSet& ruleset);
RuleSet parse_ruleset(const std::string& text);  // throws ParseError with line/column

void write_ruleset_file(const RuleSet& ruleset, const std::filesystem::path& path);
RuleSet read_ruleset_file(const std::filesystem::path& path);

}  // namespace rulekit
