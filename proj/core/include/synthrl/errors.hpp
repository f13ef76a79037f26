#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synthrl {

// Configuration cannot be satisfied (e.g. fewer than two people per universe).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A rejection sampler ran out of retries.
class GenerationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A question anchors on a name that is not in the universe.
class UnknownAnchor : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CycleDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TemplateMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoQueryablePair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested more samples than the pool holds.
class SampleSizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file. `line` is 1-based, 0 when unknown; `record` names the
// offending record (id or index) when one could be identified.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::string record = {})
      : std::runtime_error(what), line_(line), record_(std::move(record)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& record() const noexcept { return record_; }

 private:
  std::size_t line_;
  std::string record_;
};

}  // namespace synthrl
