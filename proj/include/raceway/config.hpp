#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace raceway {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// INI-style configuration: [section] headers, key = value lines,
/// '#'/';' comments. Keys keep their line numbers so schema violations
/// report the offending line.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text, const std::string& name = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  /// Comma-separated list of doubles.
  std::vector<double> get_list(const std::string& section, const std::string& key) const;

  /// Errors (with line numbers) on any key not in the allowed set of its
  /// section, or any section not in the schema.
  void check_schema(const std::map<std::string, std::set<std::string>>& allowed) const;

  const std::string& name() const { return name_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string name_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::map<std::string, int> section_lines_;

  const Entry* find(const std::string& section, const std::string& key) const;
  [[noreturn]] void fail(int line, const std::string& msg) const;
};

}  // namespace raceway
