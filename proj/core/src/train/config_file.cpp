#include "ugnn/train/config_file.hpp"

#include <fstream>
#include <sstream>

#include "ugnn/common/csv.hpp"
#include "ugnn/common/error.hpp"

namespace ugnn::train {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cur = trim(cur);
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw DataError("config: malformed section header at line " + std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("config: expected key = value at line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw DataError("config: empty key at line " + std::to_string(line_no));
    if (section.empty()) {
      throw DataError("config: key outside any [section] at line " + std::to_string(line_no));
    }
    if (!cfg.sections_[section].emplace(key, value).second) {
      throw DataError("config: duplicate key " + section + "." + key);
    }
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) != 0;
}

std::string ConfigFile::fetch(const std::string& section, const std::string& key, bool required,
                              const std::string& fallback) {
  consumed_.insert(section + "." + key);
  auto s = sections_.find(section);
  if (s == sections_.end() || s->second.find(key) == s->second.end()) {
    if (required) throw ArgumentError("config: missing key " + section + "." + key);
    return fallback;
  }
  return s->second.at(key);
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) {
  return fetch(section, key, true, "");
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) {
  return fetch(section, key, false, fallback);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) {
  const std::string v = fetch(section, key, false, "");
  if (v.empty()) return fallback;
  return csv::parse_double(v, section + "." + key);
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) {
  const std::string v = fetch(section, key, false, "");
  if (v.empty()) return fallback;
  return static_cast<int>(csv::parse_double(v, section + "." + key));
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key,
                                  std::uint64_t fallback) {
  const std::string v = fetch(section, key, false, "");
  if (v.empty()) return fallback;
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ArgumentError("config: expected unsigned integer for " + section + "." + key);
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) {
  const std::string v = fetch(section, key, false, "");
  if (v.empty()) return fallback;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ArgumentError("config: expected boolean for " + section + "." + key);
}

std::vector<int> ConfigFile::get_int_list(const std::string& section, const std::string& key,
                                          const std::vector<int>& fallback) {
  const std::string v = fetch(section, key, false, "");
  if (v.empty()) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(v)) {
    out.push_back(static_cast<int>(csv::parse_double(item, section + "." + key)));
  }
  return out;
}

std::vector<double> ConfigFile::get_double_list(const std::string& section,
                                                const std::string& key,
                                                const std::vector<double>& fallback) {
  const std::string v = fetch(section, key, false, "");
  if (v.empty()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(v)) {
    out.push_back(csv::parse_double(item, section + "." + key));
  }
  return out;
}

std::vector<std::string> ConfigFile::get_string_list(const std::string& section,
                                                     const std::string& key,
                                                     const std::vector<std::string>& fallback) {
  const std::string v = fetch(section, key, false, "");
  if (v.empty()) return fallback;
  return split_list(v);
}

void ConfigFile::ensure_all_consumed() const {
  for (const auto& [section, kv] : sections_) {
    for (const auto& [key, value] : kv) {
      if (!consumed_.count(section + "." + key)) {
        throw ArgumentError("config: unknown key " + section + "." + key);
      }
    }
  }
}

std::string ConfigFile::to_text() const {
  std::ostringstream os;
  for (const auto& [section, kv] : sections_) {
    os << '[' << section << "]\n";
    for (const auto& [key, value] : kv) os << key << " = " << value << '\n';
    os << '\n';
  }
  return os.str();
}

}  // namespace ugnn::train
