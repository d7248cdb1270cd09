#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

namespace paretothresh {

/// SplitMix64 (Vigna). Used to expand a 64-bit seed into generator state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** (Blackman & Vigna). Portable, seedable, fast; state is
/// expanded from the seed with SplitMix64 as recommended by the authors.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n). Requires n >= 1.
  std::size_t uniform_index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform01() * static_cast<double>(n)));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
};

using Rng = Xoshiro256;

/// Stream-splitting rule: child stream `k` of run seed `s` is an Xoshiro256
/// seeded with `s ^ (k+1)*phi64`, where phi64 is the 64-bit golden ratio
/// constant. SplitMix64 inside the Xoshiro256 constructor decorrelates the
/// nearby seeds. Streams used by the optimizers:
///   0 .. population-1   one stream per particle/salp
///   population          archive eviction draws
///   population + 1      run-level draws (MSSA food selection)
inline Rng make_stream(std::uint64_t run_seed, std::uint64_t stream_id) {
  return Rng(run_seed ^ ((stream_id + 1) * 0x9E3779B97F4A7C15ull));
}

}  // namespace paretothresh
