#ifndef SSTFT_RNG_HPP
#define SSTFT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace sstft::rng {

// Counter-based generator: every draw is a pure function of (seed, index),
// so streams are reproducible regardless of evaluation order.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull));
}

/// Uniform in [0, 1).
inline double uniform_at(std::uint64_t seed, std::uint64_t index) {
  return (at(seed, index) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two counter draws.
inline double gaussian_at(std::uint64_t seed, std::uint64_t index) {
  double u1 = uniform_at(seed, 2 * index);
  double u2 = uniform_at(seed, 2 * index + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace sstft::rng

#endif
