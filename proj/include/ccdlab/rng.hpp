#pragma once

#include <cmath>
#include <cstdint>

#include "ccdlab/units.hpp"

namespace ccdlab {

// splitmix64: seed expander and stream-splitting hash.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// xoshiro256++ with splitmix64 seeding and a portable Box-Muller normal
/// (std::normal_distribution is implementation-defined, so it cannot back a
/// byte-reproducibility promise).
///
/// Stream splitting rule: trajectory k of a Monte Carlo run draws from seed
/// base_seed + k; independent noise channels within one trajectory fold in
/// the channel index via splitmix64 (see stream_seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in (0, 1]: never 0, so log() below is safe.
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform_pos();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = two_pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Seed for noise channel `channel` of trajectory `traj_index` under
/// `base_seed`, folding in the channel's own seed field.
inline std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t traj_index,
                                 std::uint64_t channel, std::uint64_t channel_seed) {
  std::uint64_t s = base_seed + traj_index;
  std::uint64_t h = splitmix64(s);
  s = h ^ (0xA0761D6478BD642Full * (channel + 1)) ^ channel_seed;
  return splitmix64(s);
}

}  // namespace ccdlab
