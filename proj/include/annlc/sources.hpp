#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "annlc/context_model.hpp"
#include "annlc/rng.hpp"

namespace annlc {

inline double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct SourceSpec {
  enum class Kind { bernoulli, bsms };
  Kind kind;
  double p;
  std::size_t n;
  std::uint64_t seed;
};

/// Deterministic synthetic binary sources.  The BSMS starts from its
/// stationary (uniform) distribution.
inline Sequence generate(const SourceSpec& spec) {
  if (spec.p < 0.0 || spec.p > 1.0) throw std::invalid_argument("generate: p outside [0,1]");
  if (spec.n == 0) throw std::invalid_argument("generate: empty length");
  Rng rng(spec.seed, 2);
  Sequence x(spec.n);
  if (spec.kind == SourceSpec::Kind::bernoulli) {
    for (auto& s : x) s = rng.bernoulli(spec.p) ? 1 : 0;
  } else {
    x[0] = rng.bernoulli(0.5) ? 1 : 0;
    for (std::size_t i = 1; i < spec.n; ++i)
      x[i] = rng.bernoulli(spec.p) ? static_cast<Symbol>(1 - x[i - 1]) : x[i - 1];
  }
  return x;
}

/// Binary symmetric channel: independent flips with probability delta.
inline Sequence bsc(std::span<const Symbol> x, double delta, std::uint64_t seed) {
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("bsc: delta outside [0,1]");
  Rng rng(seed, 3);
  Sequence z(x.begin(), x.end());
  for (auto& s : z)
    if (rng.bernoulli(delta)) s = static_cast<Symbol>(1 - s);
  return z;
}

/// Rate-distortion function of a Bern(p) source under Hamming loss:
/// h(p) - h(D) for D in [0, min(p, 1-p)], clamped at 0.
inline double rd_bernoulli(double p, double D) {
  if (p <= 0.0 || p >= 1.0) throw std::domain_error("rd_bernoulli: p outside (0,1)");
  const double dmax = std::min(p, 1.0 - p);
  if (D < 0.0 || D > dmax) throw std::domain_error("rd_bernoulli: D outside [0, min(p,1-p)]");
  return std::max(0.0, binary_entropy(p) - binary_entropy(D));
}

/// Shannon lower bound h(p) - h(D) for a binary symmetric Markov source with
/// transition probability p; exact below the critical distortion.
inline double slb_bsms(double p, double D) {
  if (p <= 0.0 || p >= 1.0) throw std::domain_error("slb_bsms: p outside (0,1)");
  if (D < 0.0 || D > 0.5) throw std::domain_error("slb_bsms: D outside [0, 1/2]");
  return std::max(0.0, binary_entropy(p) - binary_entropy(D));
}

/// Largest distortion at which the BSMS Shannon lower bound is tight:
/// D_c = (1 - sqrt(1 - (p/q)^2)) / 2 with q = 1 - p.
inline double critical_distortion(double p) {
  if (p <= 0.0 || p > 0.5) throw std::domain_error("critical_distortion: need 0 < p <= 1/2");
  const double q = 1.0 - p;
  const double r = p / q;
  return 0.5 * (1.0 - std::sqrt(1.0 - r * r));
}

}  // namespace annlc
