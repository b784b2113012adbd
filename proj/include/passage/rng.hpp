// Deterministic RNG used by variant-sheet generation. The derivation is part
// of the engine's reproducibility contract (see README), so nothing here may
// ever depend on platform or standard-library distribution internals.
#ifndef PASSAGE_RNG_HPP
#define PASSAGE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace passage {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 output finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform double in [0, 1) from the top 53 bits of one draw.
  double uniform53() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller on two consecutive 53-bit uniforms.
  // The low bit of the first uniform is forced so that log() stays finite.
  double normal() {
    const double u1 = static_cast<double>((next() >> 11) | 1u) * 0x1.0p-53;
    const double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::uint64_t state_;
};

// Independent stream per (seed, level): each level's draws do not depend on
// how many levels a run has or on draws made for other levels.
inline SplitMix64 level_stream(std::uint64_t seed, std::uint32_t level) {
  return SplitMix64(mix64(seed ^ (kGolden * (static_cast<std::uint64_t>(level) + 1))));
}

}  // namespace passage

#endif  // PASSAGE_RNG_HPP
