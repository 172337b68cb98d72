#ifndef SUBSPEC_RNG_HPP
#define SUBSPEC_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace subspec {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// splitmix64 output function: add the golden gamma, then finalize.
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
  std::uint64_t z = x + kGoldenGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Sequential splitmix64 generator; used only to seed xoshiro.
class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  constexpr std::uint64_t next() noexcept {
    const std::uint64_t out = splitmix64_mix(state_);
    state_ += kGoldenGamma;
    return out;
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256++ (Blackman and Vigna), seeded from four splitmix64 outputs.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Xoshiro256pp(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
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

  constexpr const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

  friend constexpr bool operator==(const Xoshiro256pp&, const Xoshiro256pp&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Integer in [0, bound) by 128-bit multiply-shift: exactly one draw per call,
/// bias at most bound / 2^64.
inline std::uint64_t bounded(Xoshiro256pp& rng, std::uint64_t bound) noexcept {
  const unsigned __int128 prod =
      static_cast<unsigned __int128>(rng()) * static_cast<unsigned __int128>(bound);
  return static_cast<std::uint64_t>(prod >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Xoshiro256pp& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal by Box-Muller; consumes exactly two draws.
inline double standard_normal(Xoshiro256pp& rng) noexcept {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace subspec

#endif  // SUBSPEC_RNG_HPP
