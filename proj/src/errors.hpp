#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rulekit {

// Error categories; the numeric values double as CLI exit codes.
enum class ErrorKind : int {
  Config = 2,
  Data = 3,
  Learner = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(ErrorKind::Config, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message) : Error(ErrorKind::Data, message) {}
};

class EmptyVocabularyError : public DataError {
 public:
  explicit EmptyVocabularyError(const std::string& message) : DataError(message) {}
};

class InvalidRestrictionError : public DataError {
 public:
  explicit InvalidRestrictionError(const std::string& message) : DataError(message) {}
};

class SchemaMismatchError : public DataError {
 public:
  explicit SchemaMismatchError(const std::string& message) : DataError(message) {}
};

class InsufficientDataError : public DataError {
 public:
  explicit InsufficientDataError(const std::string& message) : DataError(message) {}
};

class InvalidSpecError : public ConfigError {
 public:
  explicit InvalidSpecError(const std::string& message) : ConfigError(message) {}
};

// Raised when a learner cannot find any condition with positive gain for the
// very first literal of a rule. An empty conjunction would match everything,
// so "no rule" is an error rather than an empty rule.
class NoRuleFoundError : public Error {
 public:
  explicit NoRuleFoundError(const std::string& message) : Error(ErrorKind::Learner, message) {}
};

// Parse failure in a rulekit text artifact (rule-set files, synthetic specs).
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : DataError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace rulekit
