#pragma once

#include <filesystem>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gpb/errors.h"

namespace gpb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFail = 1,
  kExitUsage = 2,
  kExitUnsupported = 3,
  kExitRuntime = 4,
};

struct ConfigError : DomainError {
  using DomainError::DomainError;
};

/// Flat key-value configuration:
///
///   # comment
///   top_level_key = value
///   [section]
///   key = value        ; stored as "section.key"
///
/// Keys are case-sensitive, duplicates are rejected, values are trimmed.
class Config {
 public:
  static Config parse(std::string_view text, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& file);

  /// Flag override; replaces any file value.
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  std::optional<double> get_double(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
  std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const;
  std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) const;

  /// Throws ConfigError naming the first key not in `known`.
  void check_known(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  nlohmann::json to_json() const;

 private:
  std::string where(const std::string& key) const;

  std::string source_ = "<flags>";
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
};

struct ManifestOutput {
  std::string path;  // relative to the manifest directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

/// Record of one CLI invocation. Everything except the timestamps and the
/// thread count is a function of (argv, config contents).
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config;    // keys as given (file and flags)
  nlohmann::json resolved;  // parameters after defaults are applied
  std::optional<std::uint64_t> seed;
  std::string started_at;
  std::string finished_at;
  int threads = 1;
  int exit_code = 0;
  std::vector<ManifestOutput> outputs;

  void add_output(const std::filesystem::path& dir, const std::filesystem::path& file);
  nlohmann::json to_json() const;
  void write(const std::filesystem::path& file) const;
};

std::string sha256_file(const std::filesystem::path& file);
std::string utc_timestamp();
std::string tool_version();

/// Runs the command line (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gpb::cli
