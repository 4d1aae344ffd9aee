#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace boolperc {

/// SplitMix64 finalizer. Used to derive independent keys from a master seed.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derive a child seed from (seed, tag). Distinct tags give unrelated keys.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag + 0x632be59bd9b4e019ull));
}

/**
 * Philox4x32-10 counter-based generator.
 *
 * The key is the master seed and the upper half of the 128-bit counter is
 * the stream (sample) index, so the numbers drawn for sample i depend only on
 * (seed, i) and never on which worker produced them or in which order.
 */
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1).
  double uniform_open() {
    return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
  }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int next_ = 4;
};

}  // namespace boolperc
