#include "ruleset_io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace rulekit {

namespace {

constexpr std::string_view kHeader = "rulekit-ruleset v1";

void append_quoted(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return std::string(buf, 16);
}

const char* op_name(ConditionOp op) {
  switch (op) {
    case ConditionOp::Present: return "present";
    case ConditionOp::Absent: return "absent";
    case ConditionOp::Equals: return "equals";
    case ConditionOp::LessEqual: return "le";
    case ConditionOp::GreaterEqual: return "ge";
  }
  return "?";
}

// Splits one line into tokens, tracking the 1-based column of each token.
struct Token {
  std::string text;
  std::size_t column = 0;
  bool quoted = false;
};

class LineParser {
 public:
  LineParser(std::size_t line_no, std::string_view line) : line_no_(line_no), line_(line) {}

  std::vector<Token> tokens() {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line_.size()) {
      if (line_[i] == ' ') {
        ++i;
        continue;
      }
      Token tok;
      tok.column = i + 1;
      if (line_[i] == '"') {
        tok.quoted = true;
        ++i;
        bool closed = false;
        while (i < line_.size()) {
          char c = line_[i];
          if (c == '\\') {
            if (i + 1 >= line_.size()) {
              fail(i + 1, "dangling escape");
            }
            char e = line_[i + 1];
            switch (e) {
              case '"': tok.text.push_back('"'); break;
              case '\\': tok.text.push_back('\\'); break;
              case 'n': tok.text.push_back('\n'); break;
              case 't': tok.text.push_back('\t'); break;
              default: fail(i + 2, "unknown escape sequence");
            }
            i += 2;
          } else if (c == '"') {
            ++i;
            closed = true;
            break;
          } else {
            tok.text.push_back(c);
            ++i;
          }
        }
        if (!closed) {
          fail(line_.size() + 1, "unterminated string");
        }
      } else {
        while (i < line_.size() && line_[i] != ' ') {
          tok.text.push_back(line_[i]);
          ++i;
        }
      }
      out.push_back(std::move(tok));
    }
    return out;
  }

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw ParseError(line_no_, column, message);
  }

 private:
  std::size_t line_no_;
  std::string_view line_;
};

class RulesetParser {
 public:
  explicit RulesetParser(const std::string& text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) {
        if (start < text.size()) {
          lines_.emplace_back(text.substr(start));
        }
        break;
      }
      lines_.emplace_back(text.substr(start, end - start));
      start = end + 1;
    }
  }

  RuleSet parse();

 private:
  std::vector<std::string> lines_;
  std::size_t current_ = 0;

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw ParseError(current_ + 1, column, message);
  }

  std::vector<Token> next_line() {
    // Skip blank lines.
    while (current_ < lines_.size()) {
      LineParser lp(current_ + 1, lines_[current_]);
      std::vector<Token> toks = lp.tokens();
      if (!toks.empty()) {
        return toks;
      }
      ++current_;
    }
    throw ParseError(lines_.size() + 1, 1, "unexpected end of document");
  }

  void consume() { ++current_; }

  std::uint64_t expect_uint(const Token& tok, const char* what) const {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size() || tok.quoted) {
      fail(tok.column, std::string("expected ") + what);
    }
    return value;
  }

  double expect_double(const Token& tok, const char* what) const {
    double value = 0;
    auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size() || tok.quoted) {
      fail(tok.column, std::string("expected ") + what);
    }
    return value;
  }

  const Token& expect_count(const std::vector<Token>& toks, std::size_t n) const {
    if (toks.size() != n) {
      fail(toks.empty() ? 1 : toks.back().column, "expected " + std::to_string(n) + " fields");
    }
    return toks[0];
  }

  void expect_keyword(const Token& tok, std::string_view kw) const {
    if (tok.quoted || tok.text != kw) {
      fail(tok.column, "expected '" + std::string(kw) + "'");
    }
  }
};

RuleSet RulesetParser::parse() {
  {
    std::vector<Token> toks = next_line();
    if (toks.size() != 2 || toks[0].text != "rulekit-ruleset" || toks[1].text != "v1") {
      fail(toks[0].column, "expected header '" + std::string(kHeader) + "'");
    }
    consume();
  }

  DatasetMode mode = DatasetMode::Text;
  {
    std::vector<Token> toks = next_line();
    expect_count(toks, 2);
    expect_keyword(toks[0], "mode");
    if (toks[1].text == "text") {
      mode = DatasetMode::Text;
    } else if (toks[1].text == "tabular") {
      mode = DatasetMode::Tabular;
    } else {
      fail(toks[1].column, "mode must be 'text' or 'tabular'");
    }
    consume();
  }

  std::string target;
  {
    std::vector<Token> toks = next_line();
    expect_count(toks, 2);
    expect_keyword(toks[0], "target");
    target = toks[1].text;
    consume();
  }

  std::uint64_t fingerprint = 0;
  {
    std::vector<Token> toks = next_line();
    expect_count(toks, 2);
    expect_keyword(toks[0], "fingerprint");
    if (toks[1].text.size() != 16) {
      fail(toks[1].column, "expected a 16-digit hex fingerprint");
    }
    auto [ptr, ec] = std::from_chars(toks[1].text.data(), toks[1].text.data() + 16, fingerprint, 16);
    if (ec != std::errc() || ptr != toks[1].text.data() + 16) {
      fail(toks[1].column, "expected a 16-digit hex fingerprint");
    }
    consume();
  }

  std::vector<std::string> labels;
  {
    std::vector<Token> toks = next_line();
    expect_count(toks, 2);
    expect_keyword(toks[0], "labels");
    const std::uint64_t count = expect_uint(toks[1], "label count");
    consume();
    labels.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<Token> lt = next_line();
      expect_count(lt, 3);
      expect_keyword(lt[0], "label");
      const std::uint64_t id = expect_uint(lt[1], "label id");
      if (id != i) {
        fail(lt[1].column, "label ids must be consecutive from 0");
      }
      labels[i] = lt[2].text;
      consume();
    }
  }

  RuleSet ruleset(mode, fingerprint, std::move(labels), std::move(target));

  {
    std::vector<Token> toks = next_line();
    expect_count(toks, 2);
    expect_keyword(toks[0], "attrs");
    const std::uint64_t count = expect_uint(toks[1], "attribute count");
    consume();
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<Token> at = next_line();
      expect_count(at, 3);
      expect_keyword(at[0], "attr");
      const std::uint64_t attr = expect_uint(at[1], "attribute id");
      ruleset.bind_attribute_name(static_cast<std::uint32_t>(attr), at[2].text);
      consume();
    }
  }

  {
    std::vector<Token> toks = next_line();
    expect_count(toks, 2);
    expect_keyword(toks[0], "symbols");
    const std::uint64_t count = expect_uint(toks[1], "symbol count");
    consume();
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<Token> st = next_line();
      expect_count(st, 4);
      expect_keyword(st[0], "symbol");
      const std::uint64_t attr = expect_uint(st[1], "attribute id");
      const std::uint64_t sym = expect_uint(st[2], "symbol id");
      ruleset.bind_symbol_name(static_cast<std::uint32_t>(attr), static_cast<std::uint32_t>(sym),
                               st[3].text);
      consume();
    }
  }

  {
    std::vector<Token> toks = next_line();
    expect_count(toks, 2);
    expect_keyword(toks[0], "rules");
    const std::uint64_t count = expect_uint(toks[1], "rule count");
    consume();
    for (std::uint64_t i = 0; i < count; ++i) {
      std::vector<Token> rt = next_line();
      expect_count(rt, 13);
      expect_keyword(rt[0], "rule");
      ScoredRule scored;
      expect_keyword(rt[1], "label");
      scored.rule.label = static_cast<std::uint32_t>(expect_uint(rt[2], "label id"));
      expect_keyword(rt[3], "voc");
      scored.voc = expect_double(rt[4], "confidence value");
      if (scored.voc < 0.0 || scored.voc > 1.0) {
        fail(rt[4].column, "confidence outside [0, 1]");
      }
      expect_keyword(rt[5], "accepted");
      const std::uint64_t accepted = expect_uint(rt[6], "accepted flag");
      if (accepted > 1) {
        fail(rt[6].column, "accepted flag must be 0 or 1");
      }
      scored.accepted = accepted == 1;
      expect_keyword(rt[7], "iteration");
      scored.iteration = static_cast<std::uint32_t>(expect_uint(rt[8], "iteration"));
      expect_keyword(rt[9], "dict");
      scored.dictionary_size = static_cast<std::uint32_t>(expect_uint(rt[10], "dictionary size"));
      expect_keyword(rt[11], "conds");
      const std::uint64_t n_conds = expect_uint(rt[12], "condition count");
      consume();
      for (std::uint64_t c = 0; c < n_conds; ++c) {
        std::vector<Token> ct = next_line();
        if (ct.size() < 3) {
          fail(ct[0].column, "truncated condition");
        }
        expect_keyword(ct[0], "cond");
        Condition cond;
        if (ct[1].text == "present" || ct[1].text == "absent") {
          expect_count(ct, 3);
          cond.op = ct[1].text == "present" ? ConditionOp::Present : ConditionOp::Absent;
          cond.attribute = static_cast<std::uint32_t>(expect_uint(ct[2], "attribute id"));
        } else if (ct[1].text == "equals") {
          expect_count(ct, 4);
          cond.op = ConditionOp::Equals;
          cond.attribute = static_cast<std::uint32_t>(expect_uint(ct[2], "attribute id"));
          cond.symbol = static_cast<std::uint32_t>(expect_uint(ct[3], "symbol id"));
        } else if (ct[1].text == "le" || ct[1].text == "ge") {
          expect_count(ct, 4);
          cond.op = ct[1].text == "le" ? ConditionOp::LessEqual : ConditionOp::GreaterEqual;
          cond.attribute = static_cast<std::uint32_t>(expect_uint(ct[2], "attribute id"));
          cond.threshold = expect_double(ct[3], "threshold");
        } else {
          fail(ct[1].column, "unknown condition operator '" + ct[1].text + "'");
        }
        scored.rule.conditions.push_back(cond);
        consume();
      }
      ruleset.add(std::move(scored));
    }
  }

  {
    std::vector<Token> toks = next_line();
    expect_count(toks, 1);
    expect_keyword(toks[0], "end");
    consume();
  }

  // Rules are serialized in final order, so re-finalizing is a stable no-op.
  ruleset.finalize();
  return ruleset;
}

}  // namespace

std::string serialize_ruleset(const RuleSet& ruleset) {
  std::string out;
  out += kHeader;
  out += "\nmode ";
  out += ruleset.mode() == DatasetMode::Text ? "text" : "tabular";
  out += "\ntarget ";
  append_quoted(out, ruleset.target_name());
  out += "\nfingerprint " + hex64(ruleset.schema_fingerprint());
  out += "\nlabels " + std::to_string(ruleset.labels().size()) + "\n";
  for (std::size_t i = 0; i < ruleset.labels().size(); ++i) {
    out += "label " + std::to_string(i) + " ";
    append_quoted(out, ruleset.labels()[i]);
    out += "\n";
  }
  out += "attrs " + std::to_string(ruleset.attribute_names().size()) + "\n";
  for (const auto& [attr, name] : ruleset.attribute_names()) {
    out += "attr " + std::to_string(attr) + " ";
    append_quoted(out, name);
    out += "\n";
  }
  out += "symbols " + std::to_string(ruleset.symbol_names().size()) + "\n";
  for (const auto& [key, name] : ruleset.symbol_names()) {
    out += "symbol " + std::to_string(key.first) + " " + std::to_string(key.second) + " ";
    append_quoted(out, name);
    out += "\n";
  }
  out += "rules " + std::to_string(ruleset.size()) + "\n";
  for (const ScoredRule& scored : ruleset.rules()) {
    out += "rule label " + std::to_string(scored.rule.label) + " voc " + format_number(scored.voc) +
           " accepted " + (scored.accepted ? "1" : "0") + " iteration " +
           std::to_string(scored.iteration) + " dict " + std::to_string(scored.dictionary_size) +
           " conds " + std::to_string(scored.rule.conditions.size()) + "\n";
    for (const Condition& cond : scored.rule.conditions) {
      out += "cond ";
      out += op_name(cond.op);
      out += " " + std::to_string(cond.attribute);
      if (cond.op == ConditionOp::Equals) {
        out += " " + std::to_string(cond.symbol);
      } else if (cond.op == ConditionOp::LessEqual || cond.op == ConditionOp::GreaterEqual) {
        out += " " + format_number(cond.threshold);
      }
      out += "\n";
    }
  }
  out += "end\n";
  return out;
}

RuleSet parse_ruleset(const std::string& text) { return RulesetParser(text).parse(); }

void write_ruleset_file(const RuleSet& ruleset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  out << serialize_ruleset(ruleset);
  if (!out) {
    throw DataError("failed writing rule set to " + path.string());
  }
}

RuleSet read_ruleset_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open rule-set file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ruleset(buf.str());
}

}  // namespace rulekit
