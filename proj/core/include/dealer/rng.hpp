#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace dealer {

/// xoshiro256** 1.0 seeded through splitmix64. Pinned here instead of using
/// <random> engines/distributions so that variates are identical across
/// standard libraries.
class Xoshiro256 {
 public:
  static constexpr std::string_view kAlgorithmId =
      "xoshiro256starstar-1.0/splitmix64-seed/open01-52bit";

  explicit Xoshiro256(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1): ((x >> 12) + 0.5) * 2^-52.
  double next_open01() noexcept;

  /// Uniform on the open interval (-half_width, half_width).
  double next_symmetric(double half_width) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace dealer
