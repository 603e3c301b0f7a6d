#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace onc {

/// The single generator used everywhere. std::mt19937_64's output sequence is
/// fixed by the standard, and the helpers below avoid the implementation-defined
/// distributions, so seeded runs replay bit-identically across platforms.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64";

/// Independent stream identifiers; a run's channel draws never depend on
/// the algorithm or on coefficient/feedback draws.
enum class Stream : std::uint64_t { kChannel = 1, kSender = 2, kFeedback = 3, kAnalysis = 4 };

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t run, Stream stream) noexcept {
  return splitmix64(splitmix64(splitmix64(base) ^ run) ^ static_cast<std::uint64_t>(stream));
}

inline Rng make_rng(std::uint64_t base, std::uint64_t run, Stream stream) {
  return Rng(derive_seed(base, run, stream));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// One draw; true with probability p.
inline bool bernoulli(Rng& rng, double p) { return uniform_unit(rng) < p; }

/// Uniform integer in [0, n) by rejection; n must be nonzero.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace onc
