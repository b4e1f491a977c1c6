#include "gpb/rng.h"

namespace gpb {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

std::uint64_t component_seed(std::uint64_t seed, std::uint64_t component) {
  return splitmix64(seed ^ (0xD6E8FEB86659FD93ULL * (component + 1)));
}

void fill_standard_normal(std::uint64_t seed, std::uint64_t index, std::span<double> out) {
  std::mt19937_64 engine(substream_seed(seed, index));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& z : out) z = normal(engine);
}

}  // namespace gpb
