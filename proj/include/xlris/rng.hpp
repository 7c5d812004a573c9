#pragma once

#include <cstdint>
#include <random>

#include "xlris/types.hpp"

namespace xlris {

// Seeded random source with hand-rolled transforms. std::normal_distribution
// and friends are implementation-defined, so going through them would break
// bit-identical reproducibility across standard libraries. Everything here is
// pinned: mt19937_64 for the raw stream, 53-bit uniforms, Box-Muller normals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Independent substream for auxiliary draws (e.g. random phase baselines)
  // that must not disturb the primary draw sequence. splitmix64 finalizer.
  static Rng substream(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    return Rng(z);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // Map to (0, 1] so the log argument is never zero.
    double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * kPi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Circularly symmetric complex normal CN(0, 1).
  cplx complex_normal() {
    double re = normal();
    double im = normal();
    return cplx(re * 0x1.6a09e667f3bcdp-1, im * 0x1.6a09e667f3bcdp-1); // 1/sqrt(2)
  }

  // Unit-modulus value with phase uniform on [-pi, pi).
  cplx unit_phase() {
    double phi = -kPi + 2.0 * kPi * uniform();
    return std::polar(1.0, phi);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

} // namespace xlris
