#include "rholab/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rholab/error.hpp"

namespace rholab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> split_list(const std::string& raw, int line, const std::string& key) {
  const std::string v = trim(raw);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    throw ConfigError(line, key, "expected a bracketed list");
  }
  std::vector<std::string> out;
  const std::string body = trim(v.substr(1, v.size() - 2));
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(line, key, "empty list element");
    out.push_back(item);
  }
  return out;
}

double to_double(const std::string& text, int line, const std::string& key) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError(line, key, "expected a number, got '" + t + "'");
  }
  return v;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(line, key, "malformed key");
    if (value.empty()) throw ConfigError(line, key, "missing value");
    if (cfg.entries_.count(key)) throw ConfigError(line, key, "duplicate key");
    cfg.entries_[key] = {value, line};
  }
  return cfg;
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open '" + path + "'");
  return parse(in);
}

bool Config::has(const std::string& key) const {
  if (entries_.count(key) == 0) return false;
  used_.insert(key);
  return true;
}

void Config::set(const std::string& key, const std::string& value) {
  auto& e = entries_[key];
  e.value = value;
}

const Config::Entry& Config::entry(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(0, key, "required key is missing");
  used_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key) const { return entry(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const auto& e = entry(key);
  return to_double(e.value, e.line, key);
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::optional<double> Config::find_double(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

long long Config::get_int(const std::string& key) const {
  const auto& e = entry(key);
  const std::string t = trim(e.value);
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError(e.line, key, "expected an integer, got '" + t + "'");
  }
  return v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const auto& e = entry(key);
  const std::string t = trim(e.value);
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 0);
  if (t.empty() || t.front() == '-' || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError(e.line, key, "expected an unsigned integer, got '" + t + "'");
  }
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& e = entry(key);
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ConfigError(e.line, key, "expected true or false");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const auto& e = entry(key);
  std::vector<double> out;
  for (const auto& item : split_list(e.value, e.line, key)) out.push_back(to_double(item, e.line, key));
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key) const {
  const auto& e = entry(key);
  return split_list(e.value, e.line, key);
}

void Config::reject_unused() const {
  for (const auto& [key, e] : entries_) {
    if (!used_.count(key)) throw ConfigError(e.line, key, "unknown key");
  }
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& kv : entries_) out.push_back(kv.first);
  return out;
}

int Config::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

}  // namespace rholab
