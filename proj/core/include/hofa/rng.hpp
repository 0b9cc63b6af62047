#pragma once

// Seeded random generation with a portable output mapping, so recorded
// seeds reproduce every experiment bit-for-bit across platforms.

#include <complex>
#include <cstdint>
#include <random>

namespace hofa {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, bound) by rejection.
  std::uint32_t below(std::uint32_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return static_cast<std::uint32_t>(x % bound);
  }

  // Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::complex<double> unimodular() {
    const double theta = 6.283185307179586476925286766559 * unit();
    return {std::cos(theta), std::sin(theta)};
  }

  // Uniform on the closed unit disk (rejection from the square).
  std::complex<double> in_disk() {
    for (;;) {
      const double re = 2.0 * unit() - 1.0;
      const double im = 2.0 * unit() - 1.0;
      if (re * re + im * im <= 1.0) return {re, im};
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hofa
