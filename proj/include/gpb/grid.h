#pragma once

#include <cstddef>
#include <vector>

namespace gpb {

/// Uniform dyadic partition t_i = i 2^{-J}, i = 0..2^J, of [0, 1].
class Grid {
 public:
  explicit Grid(int level);

  int level() const noexcept { return level_; }
  std::size_t intervals() const noexcept { return std::size_t{1} << level_; }
  std::size_t size() const noexcept { return intervals() + 1; }
  double step() const noexcept { return 1.0 / static_cast<double>(intervals()); }
  double at(std::size_t i) const noexcept { return static_cast<double>(i) * step(); }
  std::vector<double> points() const;

  static constexpr int kMaxLevel = 24;

 private:
  int level_;
};

}  // namespace gpb
