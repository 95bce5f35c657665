#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>

namespace crad {

/// Flat INI-style configuration: [section] headers over key = value lines.
/// '#' and ';' start comments.  Keys are unique within a section.
struct Config {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  const std::map<std::string, std::string>& section(const std::string& name) const;

  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key) const;
  long long get_int_or(const std::string& section, const std::string& key, long long fallback) const;

  /// Sections and keys in sorted order, normalized whitespace.  This is the
  /// hashing form: two configs with equal canonical text behave identically.
  std::string canonical() const;
};

double parse_double(const std::string& text, const std::string& context);
long long parse_int(const std::string& text, const std::string& context);

/// FNV-1a, used for config hashes and RNG substream derivation.
std::uint64_t fnv1a(const std::string& text);

}  // namespace crad
