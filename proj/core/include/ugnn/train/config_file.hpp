#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ugnn::train {

/// Flat `key = value` configuration grouped by [section] headers. Lines
/// starting with # are comments. Every key must be consumed by a reader;
/// unknown keys are errors.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key);
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback);
  double get_double(const std::string& section, const std::string& key, double fallback);
  int get_int(const std::string& section, const std::string& key, int fallback);
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback);
  bool get_bool(const std::string& section, const std::string& key, bool fallback);
  std::vector<int> get_int_list(const std::string& section, const std::string& key,
                                const std::vector<int>& fallback);
  std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                      const std::vector<double>& fallback);
  std::vector<std::string> get_string_list(const std::string& section, const std::string& key,
                                           const std::vector<std::string>& fallback);

  /// Throws ArgumentError when any key was never read.
  void ensure_all_consumed() const;

  /// Canonical serialized form (sections sorted, keys sorted).
  std::string to_text() const;

 private:
  std::string fetch(const std::string& section, const std::string& key, bool required,
                    const std::string& fallback);

  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::set<std::string> consumed_;  // "section.key"
};

}  // namespace ugnn::train
