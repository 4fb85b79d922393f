#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace peak {

/// Argument outside its mathematical domain (observation or hypothesis outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A capital factor is nonpositive where a derivative was requested.
class DegenerateCapital : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Region has no feasible point inside [0,1]^W.
class InfeasibleRegion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Bad or missing configuration key; carries the key name.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace peak
