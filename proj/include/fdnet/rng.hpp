#pragma once

#include <cstdint>
#include <limits>

namespace fdnet {

// SplitMix64 step, used to derive independent seeds from structured keys.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256** (Blackman and Vigna). Cheap to seed, which matters because the
// simulator seeds one generator per trial substream.
class Xoshiro256 {
public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
      word = splitmix64(sm);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
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

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

// Seed of the substream identified by (seed, trial, link, purpose, index).
// A pure function of its key, so trials can run in any order.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t link,
                                    std::uint64_t purpose, std::uint64_t index) noexcept {
  std::uint64_t state = seed;
  std::uint64_t h = splitmix64(state);
  for (std::uint64_t part : {trial, link, purpose, index}) {
    state = h ^ (part + 0x632be59bd9b4e019ULL);
    h = splitmix64(state);
  }
  return h;
}

// Uniform draw on the open interval (0, 1) with 53 random bits.
template <typename Rng>
double open_unit(Rng& rng) {
  constexpr double scale = 1.0 / 9007199254740992.0; // 2^-53
  return (static_cast<double>(rng() >> 11) + 0.5) * scale;
}

} // namespace fdnet
