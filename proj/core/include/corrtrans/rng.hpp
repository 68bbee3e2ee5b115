#pragma once

#include <cstdint>
#include <limits>

namespace corrtrans {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream.
///
/// Output number i of a stream is a pure function of (key, i), so any
/// worker can reproduce any stream without shared state. Streams are
/// derived from a 64-bit master seed and a stream identifier, e.g. a
/// pixel index or a realization number.
class Rng {
public:
  using result_type = std::uint64_t;

  constexpr explicit Rng(std::uint64_t key = 0, std::uint64_t counter = 0) noexcept
      : key_(key), counter_(counter) {}

  /// Independent stream `stream_id` of the family rooted at `master_seed`.
  static constexpr Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) noexcept {
    return Rng(mix64(master_seed ^ mix64(stream_id + 0x632BE59BD9B4E019ULL)));
  }

  constexpr result_type operator()() noexcept {
    return mix64(key_ + (counter_++) * kWeyl);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  /// Standard normal variate (Box-Muller, consumes two uniforms).
  double normal() noexcept;

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

private:
  static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace corrtrans
