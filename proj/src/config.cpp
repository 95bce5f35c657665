#include "crad/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "crad/errors.hpp"

namespace crad {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      }
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) {
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      }
      cfg.sections[current];  // section may stay empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    if (current.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    }
    auto [ignored, inserted] = cfg.sections[current].emplace(key, value);
    (void)ignored;
    if (!inserted) {
      throw ConfigError("duplicate key '" + key + "' in section [" + current + "]");
    }
  }
  return cfg;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  return s != sections.end() && s->second.count(key) > 0;
}

const std::map<std::string, std::string>& Config::section(const std::string& name) const {
  const auto s = sections.find(name);
  if (s == sections.end()) throw ConfigError("missing section [" + name + "]");
  return s->second;
}

std::string Config::get(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  if (s == sections.end()) throw ConfigError("missing section [" + section + "]");
  const auto k = s->second.find(key);
  if (k == s->second.end()) {
    throw ConfigError("missing key '" + key + "' in section [" + section + "]");
  }
  return k->second;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
  return parse_double(get(section, key), section + "." + key);
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key) const {
  return parse_int(get(section, key), section + "." + key);
}

long long Config::get_int_or(const std::string& section, const std::string& key,
                             long long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [name, entries] : sections) {
    out += "[" + name + "]\n";
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  }
  return out;
}

double parse_double(const std::string& text, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + text + "' as a number (" + context + ")");
  }
}

long long parse_int(const std::string& text, const std::string& context) {
  long long v = 0;
  const auto* begin = text.data();
  const auto* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError("cannot parse '" + text + "' as an integer (" + context + ")");
  }
  return v;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace crad
