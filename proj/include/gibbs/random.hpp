#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace gibbs {

/// SplitMix64 finalizer; used to expand seeds into generator state.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of substream `stream` under master seed `seed`.
///
/// The pair is hashed through two SplitMix64 rounds so that neighbouring
/// stream indices produce unrelated generator states.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (stream * 0xd1b54a32d192ed03ULL);
  return splitmix64(t);
}

/// xoshiro256++ generator with substream seeding.
///
/// Every chain in the library owns one `Rng`. Chain `i` of a run with master
/// seed `s` is seeded with `derive_seed(s, i)`, so results never depend on
/// scheduling order. Satisfies `std::uniform_random_bit_generator`.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }
  Rng(std::uint64_t seed, std::uint64_t stream) noexcept { reseed(derive_seed(seed, stream)); }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe argument for -log.
  double uniform_open_zero() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Exp(rate) by inversion. rate must be positive.
  double exponential(double rate) noexcept { return -std::log(uniform_open_zero()) / rate; }

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t index(std::uint64_t n) noexcept {
    // Lemire's multiply-shift with rejection.
    __uint128_t m = static_cast<__uint128_t>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<__uint128_t>((*this)()) * n;
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

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace gibbs
