#pragma once

#include <cstdint>
#include <limits>

namespace hitlab {

/// SplitMix64 step (Steele, Lea, Flood 2014). Used for seeding and for
/// deriving independent streams; never used directly for sampling.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** 1.0 (Blackman, Vigna), state filled from SplitMix64(seed).
///
/// Reproducibility contract:
///  - `Rng(seed)` seeds the four state words with four consecutive
///    SplitMix64 outputs starting from state `seed`.
///  - `Rng::stream(seed, index)` is the generator for replica `index` under a
///    master seed: it is `Rng(mix)` with
///    `mix = splitmix64(seed) ^ (index * 0xD1B54A32D192ED03)`, which gives
///    streams that do not share a prefix.
///  - `uniform()` is `(next() >> 11) * 2^-53`, a double in [0, 1).
///  - `below(n)` is Lemire's multiply-shift with rejection, unbiased.
/// Satisfies std::uniform_random_bit_generator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static Rng stream(std::uint64_t seed, std::uint64_t index) noexcept {
    std::uint64_t sm = seed;
    const std::uint64_t base = splitmix64(sm);
    return Rng(base ^ (index * 0xD1B54A32D192ED03ULL));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return next(); }

  result_type next() noexcept {
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

  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace hitlab
