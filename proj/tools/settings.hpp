#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace peak::cli {

struct KeySpec {
  std::string name;
  std::string help;
};

/// Flat `key = value` settings for one subcommand.
///
/// Layers, lowest to highest precedence: built-in defaults, the config file,
/// `--set key=value`, then the dedicated `--key` flags. Keys outside the
/// subcommand's list are rejected with a ConfigError naming them.
class Settings {
 public:
  explicit Settings(std::vector<KeySpec> keys);

  /// `#` starts a comment; blank lines are skipped. Errors name the line.
  void load(std::istream& is, std::string_view origin);
  void load_file(const std::filesystem::path& path);
  /// One `key=value` assignment.
  void assign(std::string_view assignment);
  void set(const std::string& key, std::string value);

  [[nodiscard]] const std::vector<KeySpec>& keys() const noexcept { return keys_; }
  [[nodiscard]] bool has(const std::string& key) const;

  [[nodiscard]] std::optional<std::string> text(const std::string& key) const;
  [[nodiscard]] std::string text(const std::string& key, std::string fallback) const;
  [[nodiscard]] std::string require(const std::string& key) const;
  [[nodiscard]] std::optional<double> real(const std::string& key) const;
  [[nodiscard]] double real(const std::string& key, double fallback) const;
  [[nodiscard]] std::size_t count(const std::string& key, std::size_t fallback) const;
  [[nodiscard]] std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  [[nodiscard]] bool flag(const std::string& key, bool fallback) const;
  /// Comma-separated reals.
  [[nodiscard]] std::optional<std::vector<double>> reals(const std::string& key) const;

 private:
  void check_known(const std::string& key) const;

  std::vector<KeySpec> keys_;
  std::map<std::string, std::string> values_;
};

/// Relative paths go under $PEAK_OUTPUT_DIR when it is set.
[[nodiscard]] std::filesystem::path output_path(const std::string& value);

/// Splits on commas outside parentheses: "bern(0.3),beta(1,2)" -> two items.
[[nodiscard]] std::vector<std::string> split_list(std::string_view text);

}  // namespace peak::cli
