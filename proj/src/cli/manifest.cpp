#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

#include "gpb/cli.h"

#ifndef GPB_VERSION
#define GPB_VERSION "0.0.0"
#endif

namespace gpb::cli {

std::string tool_version() { return GPB_VERSION; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

std::string sha256_file(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + file.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (is) {
    is.read(buf.data(), buf.size());
    if (is.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount())) != 1) {
      throw std::runtime_error("sha256 update failed");
    }
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) throw std::runtime_error("sha256 final failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

void RunManifest::add_output(const std::filesystem::path& dir, const std::filesystem::path& file) {
  outputs.push_back({std::filesystem::relative(file, dir).generic_string(), std::filesystem::file_size(file),
                     sha256_file(file)});
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["schema"] = "gpb-run-manifest/1";
  j["tool"] = "gpb";
  j["version"] = tool_version();
  j["command"] = command;
  j["argv"] = argv;
  j["config"] = config;
  j["resolved"] = resolved;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["threads"] = threads;
  j["exit_code"] = exit_code;
  j["outputs"] = nlohmann::json::array();
  for (const auto& o : outputs) j["outputs"].push_back({{"path", o.path}, {"bytes", o.bytes}, {"sha256", o.sha256}});
  return j;
}

void RunManifest::write(const std::filesystem::path& file) const {
  std::ofstream os(file, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  os << to_json().dump(2) << '\n';
}

}  // namespace gpb::cli
