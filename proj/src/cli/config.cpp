#include <charconv>
#include <fstream>
#include <sstream>

#include "gpb/cli.h"

namespace gpb::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <class T>
bool parse_number(const std::string& text, T& value) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find_first_of("#;")));
    if (line.empty()) continue;
    const std::string loc = source + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(loc + "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!valid_name(section)) throw ConfigError(loc + "invalid section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(loc + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (!valid_name(key)) throw ConfigError(loc + "invalid key '" + key + "'");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.values_.count(full) != 0) {
      throw ConfigError(loc + "duplicate key '" + full + "' (first set on line " + std::to_string(cfg.lines_[full]) + ")");
    }
    cfg.values_[full] = trim(std::string_view(line).substr(eq + 1));
    cfg.lines_[full] = line_no;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file " + file.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), file.string());
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  lines_.erase(key);
}

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::require(const std::string& key) const {
  auto v = get(key);
  if (!v || v->empty()) throw ConfigError("missing required key '" + key + "'");
  return *v;
}

std::string Config::where(const std::string& key) const {
  const auto it = lines_.find(key);
  if (it == lines_.end()) return "key '" + key + "' (command line)";
  return "key '" + key + "' (" + source_ + ":" + std::to_string(it->second) + ")";
}

std::optional<double> Config::get_double(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  double x = 0.0;
  if (!parse_number(*v, x)) throw ConfigError(where(key) + ": expected a number, got '" + *v + "'");
  return x;
}

double Config::get_double(const std::string& key, double fallback) const {
  return get_double(key).value_or(fallback);
}

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  long long x = 0;
  if (!parse_number(*v, x)) throw ConfigError(where(key) + ": expected an integer, got '" + *v + "'");
  return x;
}

std::uint64_t Config::get_uint64(const std::string& key, std::uint64_t fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::uint64_t x = 0;
  if (!parse_number(*v, x)) throw ConfigError(where(key) + ": expected a non-negative integer, got '" + *v + "'");
  return x;
}

std::vector<int> Config::get_int_list(const std::string& key, std::vector<int> fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(*v)) {
    int x = 0;
    if (!parse_number(item, x)) throw ConfigError(where(key) + ": expected a comma-separated integer list, got '" + *v + "'");
    out.push_back(x);
  }
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key, std::vector<double> fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(*v)) {
    double x = 0.0;
    if (!parse_number(item, x)) throw ConfigError(where(key) + ": expected a comma-separated number list, got '" + *v + "'");
    out.push_back(x);
  }
  return out;
}

void Config::check_known(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (known.count(key) == 0) throw ConfigError("unknown " + where(key));
  }
}

nlohmann::json Config::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : values_) j[key] = value;
  return j;
}

}  // namespace gpb::cli
