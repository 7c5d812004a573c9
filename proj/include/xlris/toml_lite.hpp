#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace xlris {

// Configuration file errors carry the line number; the CLI maps them to the
// config-error exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat two-level TOML subset: [section] headers, key = value pairs, #
// comments. Values are numbers, booleans, or double-quoted strings. That is
// all a scenario file needs; anything fancier is rejected loudly rather than
// misread silently.
class TomlTable {
 public:
  using Value = std::variant<double, bool, std::string>;

  static TomlTable parse_file(const std::string& path);
  static TomlTable parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key,
                double fallback) const;
  // Requires an integral number; throws ConfigError otherwise.
  long long integer(const std::string& section, const std::string& key,
                    long long fallback) const;
  bool boolean(const std::string& section, const std::string& key,
               bool fallback) const;
  std::string str(const std::string& section, const std::string& key,
                  const std::string& fallback) const;

  // For strict validation: every (section, key) actually present.
  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  const Value* find(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, Value>> sections_;
};

} // namespace xlris
