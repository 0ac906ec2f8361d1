#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace annopipe {

// Error categories map one-to-one onto CLI exit codes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised by an annotation stage; the message is prefixed with the stage name.
class StageError : public DataError {
 public:
  StageError(std::string stage, const std::string& what)
      : DataError(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class TrainingError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace annopipe
