#pragma once

#include <cmath>
#include <cstdint>

namespace bdf::rng {

// Counter-based generator: the value drawn for (seed, stream, counter) does not
// depend on how work is partitioned across threads, which keeps every
// stochastic output byte-identical for a fixed seed.
struct Counter {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t counter = 0;

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = mix(seed);
    z = mix(z ^ stream);
    return mix(z ^ counter++);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  // Marsaglia polar method would consume a variable number of draws; use
  // Box-Muller on fixed pairs instead so the counter advances predictably.
  double normal() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }
};

} // namespace bdf::rng
