#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace stav {

// Flat key-value run configuration grouped into [section] blocks.  Lines are
// `key = value`, `#` starts a comment, blank lines are ignored.  Values are
// read back through typed getters; malformed input raises ConfigError.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& section, const std::string& key) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::vector<std::int64_t> get_int_list(const std::string& section, const std::string& key) const;
  std::vector<std::int64_t> require_int_list(const std::string& section,
                                             const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  // Stable serialization (sections and keys sorted); hashed into the manifest.
  std::string canonical() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace stav
