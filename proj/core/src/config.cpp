#include "stav/config.hpp"

#include <fstream>
#include <sstream>

#include "stav/errors.hpp"

namespace stav {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::int64_t parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not an integer at " + where + ": '" + s + "'");
  }
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw ConfigError("malformed section header on line " + std::to_string(lineno));
      section = trim(t.substr(1, t.size() - 2));
      cfg.sections_[section];
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value on line " + std::to_string(lineno));
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key on line " + std::to_string(lineno));
    if (section.empty()) throw ConfigError("key outside any [section] on line " + std::to_string(lineno));
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

std::string Config::require_string(const std::string& section, const std::string& key) const {
  if (!has(section, key))
    throw ConfigError("missing required key [" + section + "] " + key);
  return get_string(section, key, "");
}

std::int64_t Config::get_int(const std::string& section, const std::string& key,
                             std::int64_t fallback) const {
  if (!has(section, key)) return fallback;
  return parse_int(get_string(section, key, ""), "[" + section + "] " + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  if (!has(section, key)) return fallback;
  std::string s = get_string(section, key, "");
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not a number at [" + section + "] " + key + ": '" + s + "'");
  }
}

std::vector<std::int64_t> Config::get_int_list(const std::string& section,
                                               const std::string& key) const {
  std::vector<std::int64_t> out;
  if (!has(section, key)) return out;
  std::string s = get_string(section, key, "");
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::string t = trim(item);
    if (t.empty()) throw ConfigError("empty element in list [" + section + "] " + key);
    out.push_back(parse_int(t, "[" + section + "] " + key));
  }
  return out;
}

std::vector<std::int64_t> Config::require_int_list(const std::string& section,
                                                   const std::string& key) const {
  if (!has(section, key))
    throw ConfigError("missing required key [" + section + "] " + key);
  auto v = get_int_list(section, key);
  if (v.empty()) throw ConfigError("empty list at [" + section + "] " + key);
  return v;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = value;
}

std::string Config::canonical() const {
  std::ostringstream os;
  for (const auto& [sec, kv] : sections_) {
    for (const auto& [k, v] : kv) os << sec << "." << k << "=" << v << "\n";
  }
  return os.str();
}

}  // namespace stav
