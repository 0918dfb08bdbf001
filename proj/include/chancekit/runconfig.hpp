#ifndef CHANCEKIT_RUNCONFIG_HPP
#define CHANCEKIT_RUNCONFIG_HPP

#include <charconv>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "chancekit/core.hpp"

namespace chancekit {

// Flat `key = value` configuration. '#' starts a comment; blank lines
// are ignored. Flags override file values; unknown keys are errors.
struct RunConfig {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }

  void set(const std::string& key, const std::string& value) {
    values[key] = value;
  }

  void validate_keys(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values)
      if (!allowed.count(key))
        throw ParseError("unknown configuration key \"" + key + "\"");
  }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }

  long long get_int(const std::string& key, long long fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    long long v = 0;
    const auto& s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
      throw ParseError("configuration key \"" + key +
                       "\" expects an integer, got \"" + s + "\"");
    return v;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    double v = 0;
    const auto& s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
      throw ParseError("configuration key \"" + key +
                       "\" expects a number, got \"" + s + "\"");
    return v;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = values.find(key);
    if (it == values.end()) return fallback;
    const auto& s = it->second;
    if (s == "on" || s == "true" || s == "1") return true;
    if (s == "off" || s == "false" || s == "0") return false;
    throw ParseError("configuration key \"" + key +
                     "\" expects on/off, got \"" + s + "\"");
  }
};

inline RunConfig parse_runconfig(std::istream& in) {
  RunConfig cfg;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq <= first)
      throw ParseError("config line " + std::to_string(line_no) +
                       ": expected key = value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError("config line " + std::to_string(line_no) +
                       ": empty key");
    cfg.values[key] = value;
  }
  return cfg;
}

}  // namespace chancekit

#endif  // CHANCEKIT_RUNCONFIG_HPP
