#include "xlris/toml_lite.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace xlris {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strip a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

[[noreturn]] void fail(int line, const std::string& what) {
  std::ostringstream os;
  os << "config line " << line << ": " << what;
  throw ConfigError(os.str());
}

} // namespace

TomlTable TomlTable::parse_string(const std::string& text) {
  TomlTable t;
  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) fail(lineno, "bad section name");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!valid_key(key)) fail(lineno, "bad key name '" + key + "'");
    if (val.empty()) fail(lineno, "missing value for '" + key + "'");

    Value parsed;
    if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"')
        fail(lineno, "unterminated string");
      parsed = val.substr(1, val.size() - 2);
    } else if (val == "true") {
      parsed = true;
    } else if (val == "false") {
      parsed = false;
    } else {
      char* end = nullptr;
      double num = std::strtod(val.c_str(), &end);
      if (end == val.c_str() || *end != '\0')
        fail(lineno, "cannot parse value '" + val + "'");
      parsed = num;
    }
    if (t.sections_[section].count(key))
      fail(lineno, "duplicate key '" + key + "'");
    t.sections_[section][key] = std::move(parsed);
  }
  return t;
}

TomlTable TomlTable::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

const TomlTable::Value* TomlTable::find(const std::string& section,
                                        const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

bool TomlTable::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

double TomlTable::number(const std::string& section, const std::string& key,
                         double fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (const double* d = std::get_if<double>(v)) return *d;
  throw ConfigError("key '" + section + "." + key + "' must be a number");
}

long long TomlTable::integer(const std::string& section,
                             const std::string& key,
                             long long fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  const double* d = std::get_if<double>(v);
  if (!d || *d != std::floor(*d))
    throw ConfigError("key '" + section + "." + key + "' must be an integer");
  return static_cast<long long>(*d);
}

bool TomlTable::boolean(const std::string& section, const std::string& key,
                        bool fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (const bool* b = std::get_if<bool>(v)) return *b;
  throw ConfigError("key '" + section + "." + key + "' must be a boolean");
}

std::string TomlTable::str(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  const Value* v = find(section, key);
  if (!v) return fallback;
  if (const std::string* s = std::get_if<std::string>(v)) return *s;
  throw ConfigError("key '" + section + "." + key + "' must be a string");
}

std::vector<std::pair<std::string, std::string>> TomlTable::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [sec, kv] : sections_)
    for (const auto& [key, _] : kv) out.emplace_back(sec, key);
  return out;
}

} // namespace xlris
