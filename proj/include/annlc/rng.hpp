#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace annlc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seedable 64-bit generator with numbered sub-streams.
///
/// Engine is std::mt19937_64 (fully specified by the standard, so sequences
/// are identical across platforms).  Draw helpers below avoid the standard
/// distributions, which are implementation-defined.  Stream convention used
/// by the annealers: stream 0 draws positions, stream 1 draws symbols.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    // burn `stream + 1` splitmix outputs so distinct streams start from
    // decorrelated engine seeds
    std::uint64_t derived = 0;
    for (std::uint64_t i = 0; i <= stream; ++i) derived = splitmix64(s);
    engine_.seed(derived);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Unbiased draw in [0, bound) by rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound = 0");
    const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
    const std::uint64_t accept_max = std::numeric_limits<std::uint64_t>::max() - rem;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > accept_max);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Inverse-CDF draw from a pmf (entries sum to ~1).  Falls back to the
  /// last positive entry if rounding leaves the cumulative sum short of u.
  std::size_t sample_pmf(std::span<const double> pmf) {
    const double u = uniform01();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      if (pmf[i] > 0.0) last_positive = i;
      cum += pmf[i];
      if (u < cum) return i;
    }
    return last_positive;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace annlc
