#pragma once

#include <filesystem>
#include <json.hpp>

#include "gpb/sampling.h"

namespace gpb {

inline constexpr char kBinaryMagic[4] = {'G', 'P', 'B', 'E'};
inline constexpr std::uint32_t kBinaryVersion = 1;

/// One row per path, values printed with 17 significant digits.
void write_csv(const PathEnsemble& ensemble, const std::filesystem::path& file);

/// Little-endian: "GPBE", u32 version, u64 M, u64 N, then M*N f64 row-major.
void write_binary(const PathEnsemble& ensemble, const std::filesystem::path& file);

void write_sidecar(const PathEnsemble& ensemble, const std::filesystem::path& file);

/// Raw matrix readers (no provenance).
RowMatrix read_binary(const std::filesystem::path& file);
RowMatrix read_csv(const std::filesystem::path& file);

/// Formats a double with 17 significant digits.
std::string format_double(double x);

}  // namespace gpb
