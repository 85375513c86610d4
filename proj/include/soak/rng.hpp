#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace soak {

namespace detail {

// SplitMix64 output function (Steele, Lea, Flood), used for seeding only.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl64(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Deterministic sub-streamed generator.
///
/// The core is xoshiro256++ (Blackman/Vigna). Its 256-bit state is expanded
/// with the SplitMix64 sequence from a hash of (master_seed, stream_id), so a
/// given pair names the same sample sequence on every platform and under any
/// worker count. Uniform doubles take the top 53 bits of one 64-bit word;
/// normals use the Marsaglia polar method; exponentials use inversion.
///
/// A stream has a single owner: create one per logical task and never share
/// it between threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept {
    std::uint64_t x = detail::mix64(master_seed + 0x9E3779B97F4A7C15ULL) ^
                      detail::mix64(stream_id + 0x6A09E667F3BCC909ULL);
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      word = detail::mix64(x);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result =
        detail::rotl64(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1), 53 random bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Exponential with mean 1; the [0,1) uniform keeps the log finite.
  double next_exponential() noexcept { return -std::log(1.0 - next_unit()); }

  /// Two independent standard normals from one polar-method round.
  std::pair<double, double> next_normal_pair() noexcept {
    double u, v, s;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    return {u * f, v * f};
  }

 private:
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace soak
