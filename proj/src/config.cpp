#include "raceway/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace raceway {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void ConfigFile::fail(int line, const std::string& msg) const {
  throw ConfigError(name_ + ":" + std::to_string(line) + ": " + msg);
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& name) {
  ConfigFile cf;
  cf.name_ = name;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t cpos = line.find_first_of("#;");
    if (cpos != std::string::npos) line = line.substr(0, cpos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') cf.fail(lineno, "malformed section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) cf.fail(lineno, "empty section name");
      cf.section_lines_.emplace(section, lineno);
      cf.sections_[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) cf.fail(lineno, "expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) cf.fail(lineno, "empty key");
    if (section.empty()) cf.fail(lineno, "key outside any [section]");
    auto [it, inserted] = cf.sections_[section].emplace(key, Entry{value, lineno});
    if (!inserted) cf.fail(lineno, "duplicate key '" + key + "' in [" + section + "]");
  }
  return cf;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  auto s = sections_.find(lower(section));
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(lower(key));
  return k == s->second.end() ? nullptr : &k->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(e->line, "expected a number for '" + key + "', got '" + e->value + "'");
  }
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    size_t pos = 0;
    const int v = std::stoi(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(e->line, "expected an integer for '" + key + "', got '" + e->value + "'");
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const std::string v = lower(e->value);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(e->line, "expected a boolean for '" + key + "', got '" + e->value + "'");
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

std::vector<double> ConfigFile::get_list(const std::string& section,
                                         const std::string& key) const {
  const Entry* e = find(section, key);
  std::vector<double> out;
  if (!e) return out;
  std::istringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(e->line, "empty element in list '" + key + "'");
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("");
    } catch (...) {
      fail(e->line, "expected a number in list '" + key + "', got '" + item + "'");
    }
  }
  return out;
}

void ConfigFile::check_schema(
    const std::map<std::string, std::set<std::string>>& allowed) const {
  for (const auto& [section, entries] : sections_) {
    auto it = allowed.find(section);
    if (it == allowed.end())
      fail(section_lines_.at(section), "unknown section [" + section + "]");
    for (const auto& [key, entry] : entries)
      if (!it->second.count(key))
        fail(entry.line, "unknown key '" + key + "' in [" + section + "]");
  }
}

}  // namespace raceway
