#include "dealer/rng.hpp"

#include <cmath>

namespace dealer {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t Xoshiro256::next_u64() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::next_open01() noexcept {
  // k + 0.5 with k < 2^52 fits in 53 bits, so u is exact and never 0 or 1.
  constexpr double kScale = 0x1.0p-52;
  return (static_cast<double>(next_u64() >> 12) + 0.5) * kScale;
}

double Xoshiro256::next_symmetric(double half_width) noexcept {
  // 2u - 1 is exact and lies in [-(1 - 2^-52), 1 - 2^-52].
  const double r = (2.0 * next_open01() - 1.0) * half_width;
  if (std::fabs(r) >= half_width && half_width > 0.0) {
    return std::nextafter(r, 0.0);
  }
  return r;
}

}  // namespace dealer
