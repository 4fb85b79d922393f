#include "settings.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>

#include "peak/errors.hpp"

namespace peak::cli {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

Settings::Settings(std::vector<KeySpec> keys) : keys_(std::move(keys)) {}

void Settings::check_known(const std::string& key) const {
  const bool known =
      std::any_of(keys_.begin(), keys_.end(), [&](const KeySpec& k) { return k.name == key; });
  if (!known) throw ConfigError(key, "unknown key");
}

void Settings::set(const std::string& key, std::string value) {
  check_known(key);
  values_[key] = std::move(value);
}

void Settings::assign(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(trim(assignment), "expected key = value");
  }
  const auto key = trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError("(empty)", "missing key before '='");
  set(key, trim(assignment.substr(eq + 1)));
}

void Settings::load(std::istream& is, std::string_view origin) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(trim(line), std::string(origin) + " line " + std::to_string(n) +
                                        ": expected key = value");
    }
    const auto key = trim(std::string_view(line).substr(0, eq));
    const bool known =
        std::any_of(keys_.begin(), keys_.end(), [&](const KeySpec& k) { return k.name == key; });
    if (!known) {
      throw ConfigError(key, std::string(origin) + " line " + std::to_string(n) + ": unknown key");
    }
    values_[key] = trim(std::string_view(line).substr(eq + 1));
  }
}

void Settings::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  load(in, path.string());
}

bool Settings::has(const std::string& key) const { return values_.count(key) != 0; }

std::optional<std::string> Settings::text(const std::string& key) const {
  check_known(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Settings::text(const std::string& key, std::string fallback) const {
  return text(key).value_or(std::move(fallback));
}

std::string Settings::require(const std::string& key) const {
  auto v = text(key);
  if (!v || v->empty()) throw ConfigError(key, "required key is missing");
  return *v;
}

std::optional<double> Settings::real(const std::string& key) const {
  const auto v = text(key);
  if (!v) return std::nullopt;
  char* end = nullptr;
  const double d = std::strtod(v->c_str(), &end);
  if (v->empty() || end != v->c_str() + v->size()) {
    throw ConfigError(key, "expected a number, got '" + *v + "'");
  }
  return d;
}

double Settings::real(const std::string& key, double fallback) const {
  return real(key).value_or(fallback);
}

std::uint64_t Settings::u64(const std::string& key, std::uint64_t fallback) const {
  const auto v = text(key);
  if (!v) return fallback;
  if (v->empty() || !std::all_of(v->begin(), v->end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ConfigError(key, "expected a nonnegative integer, got '" + *v + "'");
  }
  errno = 0;
  const auto n = std::strtoull(v->c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError(key, "integer out of range");
  return n;
}

std::size_t Settings::count(const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(u64(key, fallback));
}

bool Settings::flag(const std::string& key, bool fallback) const {
  const auto v = text(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + *v + "'");
}

std::optional<std::vector<double>> Settings::reals(const std::string& key) const {
  const auto v = text(key);
  if (!v) return std::nullopt;
  std::vector<double> out;
  for (const auto& item : split_list(*v)) {
    char* end = nullptr;
    const double d = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw ConfigError(key, "expected comma-separated numbers, got '" + *v + "'");
    }
    out.push_back(d);
  }
  return out;
}

std::filesystem::path output_path(const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("PEAK_OUTPUT_DIR"); dir && *dir) {
    return std::filesystem::path(dir) / p;
  }
  return p;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size()) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')') --depth;
      if (text[i] != ',' || depth != 0) continue;
    }
    auto item = trim(text.substr(start, i - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = i + 1;
  }
  return out;
}

}  // namespace peak::cli
