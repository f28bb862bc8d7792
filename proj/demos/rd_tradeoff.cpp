// Minimal library walkthrough: quantize a binary Markov sample at a few
// slopes and print the achieved (distortion, conditional entropy) pairs next
// to the Shannon lower bound.

#include <cstdio>

#include "annlc/block_annealer.hpp"
#include "annlc/lossless.hpp"
#include "annlc/sources.hpp"

using namespace annlc;

int main() {
  const double p = 0.2;
  const std::size_t n = 10000;
  const auto x = generate({SourceSpec::Kind::bsms, p, n, 42});

  std::printf("BSMS(%.1f), n=%zu, H(source) ~ h(p) = %.4f bits\n", p, n, binary_entropy(p));
  std::printf("%8s %10s %10s %10s %10s\n", "alpha", "D", "Hk", "lz/n", "SLB(D)");

  const auto dist = DistortionMatrix::hamming(2);
  Sequence warm = x;
  for (double alpha : {4.0, 3.0, 2.0}) {
    EnergySpec spec(alpha, ContextShape::previous(7), dist);
    AnnealerConfig cfg{spec, Schedule::geometric(1.0, 0.8, n), 10 * n, 1};
    cfg.init = &warm;
    const AnnealResult r = anneal(x, cfg);
    const double lz = static_cast<double>(lz78_length(r.output, 2)) / static_cast<double>(n);
    std::printf("%8.1f %10.4f %10.4f %10.4f %10.4f\n", alpha, r.distortion, r.hk_bits, lz,
                slb_bsms(p, std::max(1e-9, r.distortion)));
    warm = r.output;
  }
  return 0;
}
