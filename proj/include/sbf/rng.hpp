#pragma once

#include <cstdint>

namespace sbf {

/// splitmix64 stream. Used everywhere instead of <random> engines so that
/// results are identical across standard libraries and thread counts.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform in (0, 1].
  double uniform01_open_closed() { return 1.0 - uniform01(); }

  /// Uniform integer in [0, n). Modulo bias is irrelevant for the tiny n used here.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool coin() { return (next() & 1ull) != 0; }

 private:
  std::uint64_t state_;
};

/// Counter-based stream derivation: item `index` of batch `seed` gets an
/// independent generator, so batches are order- and thread-independent.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0xbf58476d1ce4e5b9ull * (index + 1)));
  g.next();
  return g.next();
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive_stream(derive_stream(seed, a), b);
}

}  // namespace sbf
