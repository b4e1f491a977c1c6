#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace gpb {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent substream; depends only on (seed, index), so the
/// assignment of paths to threads never changes the draws.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Seed for a named component of a composite draw (decomposition summands).
std::uint64_t component_seed(std::uint64_t seed, std::uint64_t component);

/// Fills `out` with iid standard normals from the substream (seed, index).
void fill_standard_normal(std::uint64_t seed, std::uint64_t index, std::span<double> out);

}  // namespace gpb
