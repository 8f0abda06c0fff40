#pragma once

#include <cstdint>
#include <stdexcept>

namespace cyclap::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 output stage (Vigna); bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Combines a seed with stream labels into a new 64-bit key.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0,
                                   std::uint64_t c = 0) noexcept {
  std::uint64_t h = mix64(seed + kGamma);
  h = mix64(h ^ (a + kGamma));
  h = mix64(h ^ (b + kGamma));
  h = mix64(h ^ (c + kGamma));
  return h;
}

/// Counter-based random stream: draw k of stream i is
/// mix64(s0 + kGamma * (i * 2^40 + k)), i.e. the splitmix64 sequence seeded
/// with s0 and evaluated on disjoint counter blocks. Streams with distinct
/// indices under the same seed never share a counter, so they never share a
/// variate. Stateless construction; safe to create concurrently.
class RandomStream {
 public:
  static constexpr std::uint64_t kMaxStreams = 1ULL << 24;
  static constexpr std::uint64_t kDrawsPerStream = 1ULL << 40;

  RandomStream(std::uint64_t seed, std::uint64_t stream) {
    if (stream >= kMaxStreams)
      throw std::invalid_argument("RandomStream: stream index exceeds 2^24");
    cursor_ = mix64(seed + kGamma) + kGamma * (stream << 40);
  }

  std::uint64_t next_u64() noexcept {
    cursor_ += kGamma;
    return mix64(cursor_);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t cursor_;
};

}  // namespace cyclap::rng
