#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace pyroclass {

/// xoshiro256** (Blackman & Vigna) seeded through splitmix64.
/// Bit-for-bit reproducible across platforms, unlike the std:: distributions.
class Xoshiro256 {
public:
  explicit Xoshiro256(std::uint64_t seed);
  /// Raw state; must not be all zero.
  explicit Xoshiro256(const std::array<std::uint64_t, 4>& state) : s_{state[0], state[1], state[2], state[3]} {}

  std::uint64_t next();
  /// Uniform integer in [0, bound) by rejection of the biased low range; bound > 0.
  std::uint64_t below(std::uint64_t bound);

private:
  std::uint64_t s_[4];
};

/// In-place Fisher-Yates: for i = n-1 down to 1 swap v[i] with v[below(i + 1)].
void shuffle(std::vector<std::size_t>& v, Xoshiro256& rng);

} // namespace pyroclass
