#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dysa/vec.hpp"

// Counter-based splittable random streams. A stream is identified by
// (seed, path): the key is a hash fold of the path over the seed and each
// draw mixes (key, counter), so any (seed, path) replays the identical
// sequence no matter which thread or call site consumes it. Child streams
// never share draws with the parent or with siblings.

namespace dysa {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer; full-avalanche bijection on 64 bits.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix64(seed + kGolden)) {}

  RngStream(std::uint64_t seed, const std::vector<std::uint32_t>& path) : RngStream(seed) {
    for (std::uint32_t id : path) fold(id);
  }

  // Independent sub-stream; the child starts at counter 0.
  RngStream child(std::uint32_t id) const {
    RngStream s = *this;
    s.fold(id);
    return s;
  }

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

  // Uniform on (0, 1]; never returns 0, so log() stays finite.
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; the spare is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("RngStream::next_below: n must be positive");
    // rejection keeps the draw exactly uniform
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

 private:
  void fold(std::uint32_t id) {
    key_ = mix64(key_ ^ ((static_cast<std::uint64_t>(id) + 1) * kGolden));
    counter_ = 0;
    have_spare_ = false;
    spare_ = 0.0;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline RngStream make_stream(std::uint64_t seed, const std::vector<std::uint32_t>& path = {}) {
  return RngStream(seed, path);
}

// Independent coordinates mean[i] + stddev * N(0,1). stddev == 0 returns the
// mean bit-for-bit and consumes no draws.
inline Vector gaussian_vector(RngStream& stream, std::size_t d, const Vector& mean, double stddev) {
  if (mean.size() != d)
    throw std::invalid_argument("gaussian_vector: mean dimension mismatch");
  if (!(stddev >= 0.0))
    throw std::invalid_argument("gaussian_vector: stddev must be nonnegative");
  if (stddev == 0.0) return mean;
  Vector out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = mean[i] + stddev * stream.normal();
  return out;
}

// Zero-mean unit-variance coordinates.
inline Vector gaussian_vector(RngStream& stream, std::size_t d) {
  Vector out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = stream.normal();
  return out;
}

}  // namespace dysa
