#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace relaydmt {

// Counter-seeded xoshiro256** stream. Every Monte Carlo trial owns a stream
// derived from (seed, hi, lo), so results do not depend on how trials are
// partitioned across worker threads. All distributions below are implemented
// on top of next() with a fixed draw order; nothing is delegated to
// implementation-defined std::<distribution> sequences.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    std::uint64_t x = seed;
    x = mix64(x ^ mix64(hi + 0x9E3779B97F4A7C15ULL));
    x = mix64(x ^ mix64(lo + 0xD1B54A32D192ED03ULL));
    for (auto& w : s_) {
      x += 0x9E3779B97F4A7C15ULL;
      w = mix64(x);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is absorbing
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // standard normal pair via Box-Muller; always consumes exactly two uniforms
  void normal_pair(double& a, double& b) {
    const double u1 = 1.0 - uniform();  // (0,1], keeps log() finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    a = r * std::cos(t);
    b = r * std::sin(t);
  }

  double normal() {
    double a, b;
    normal_pair(a, b);
    return a;
  }

  // CN(0,1): E|z|^2 = 1
  std::complex<double> complex_normal() {
    double a, b;
    normal_pair(a, b);
    return {a * 0.7071067811865476, b * 0.7071067811865476};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t s_[4];
};

}  // namespace relaydmt
