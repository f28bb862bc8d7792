#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "annlc/block_annealer.hpp"
#include "annlc/context_model.hpp"
#include "annlc/energy.hpp"

namespace annlc {

/// Additive modulo-M noise: Z_i = X_i + V_i mod M, with P_V everywhere
/// positive.
struct NoiseModel {
  int m;
  std::vector<double> pv;

  NoiseModel(int alphabet, std::vector<double> pmf) : m(alphabet), pv(std::move(pmf)) {
    if (m < 2 || pv.size() != static_cast<std::size_t>(m))
      throw std::invalid_argument("NoiseModel: pmf size mismatch");
    double sum = 0.0;
    for (double p : pv) {
      if (p <= 0.0) throw std::domain_error("NoiseModel: P_V must be strictly positive");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("NoiseModel: pmf must sum to 1");
  }

  static NoiseModel bsc(double delta) { return NoiseModel(2, {1.0 - delta, delta}); }
};

/// rho(x, y) = log2 1/P_V(x - y mod M).  Lossy coding of the noisy signal
/// under this measure at distortion level H(V) recovers the clean-signal
/// statistics.
inline DistortionMatrix difference_distortion(const NoiseModel& noise) {
  const int m = noise.m;
  std::vector<double> d(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      const int v = ((x - y) % m + m) % m;
      d[static_cast<std::size_t>(x) * m + y] = std::log2(1.0 / noise.pv[static_cast<std::size_t>(v)]);
    }
  return DistortionMatrix(m, m, std::move(d));
}

/// H(V) in bits; the target distortion level for denoising-by-compression.
inline double noise_entropy(const NoiseModel& noise) {
  double h = 0.0;
  for (double p : noise.pv) h -= p * std::log2(p);
  return h;
}

struct SlopeSearchConfig {
  ContextShape shape;
  Schedule schedule;
  std::uint64_t seed = 1;
  double alpha1 = 0.5;
  double alpha2 = 1.5;
  double tol = 0.05;      // relative to the target level H(V)
  int max_probes = 8;
  std::size_t prefix = 10000;
  std::uint64_t iteration_multiplier = 10;  // probe run length = multiplier * prefix
};

struct SlopeProbe {
  double alpha;
  double distortion;
};

struct SlopeResult {
  double alpha = 0.0;
  double distortion = 0.0;
  bool converged = false;  // false = best effort after max_probes (warning)
  std::vector<SlopeProbe> probes;
};

/// Secant search for the slope whose quantization distortion (under the
/// difference measure) lands within tol*H(V) of H(V).  Probes run on a
/// prefix of the noisy signal; probe i uses seed + i.
inline SlopeResult slope_search(std::span<const Symbol> z, const NoiseModel& noise,
                                const SlopeSearchConfig& cfg) {
  if (cfg.tol <= 0.0) throw std::invalid_argument("slope_search: tol must be positive");
  const std::size_t len = std::min(cfg.prefix, z.size());
  const auto prefix = z.subspan(0, len);
  const double target = noise_entropy(noise);
  const DistortionMatrix rho = difference_distortion(noise);

  SlopeResult result;
  auto probe = [&](double alpha) {
    AnnealerConfig run{EnergySpec(alpha, cfg.shape, rho, Boundary::linear), cfg.schedule,
                       cfg.iteration_multiplier * len,
                       cfg.seed + static_cast<std::uint64_t>(result.probes.size())};
    const AnnealResult r = anneal(prefix, run);
    result.probes.push_back({alpha, r.distortion});
    return r.distortion;
  };
  auto within = [&](double d) { return std::abs(d - target) <= cfg.tol * target; };

  double a1 = cfg.alpha1, d1 = probe(a1);
  if (within(d1)) {
    result.alpha = a1;
    result.distortion = d1;
    result.converged = true;
    return result;
  }
  double a2 = cfg.alpha2, d2 = probe(a2);
  while (!within(d2) && static_cast<int>(result.probes.size()) < cfg.max_probes) {
    double next;
    if (std::abs(d2 - d1) < 1e-12) {
      next = a2 * 2.0 + 0.1;  // flat response: expand instead of dividing by ~0
    } else {
      next = a2 + (target - d2) * (a2 - a1) / (d2 - d1);
    }
    next = std::clamp(next, 0.0, 50.0);
    a1 = a2;
    d1 = d2;
    a2 = next;
    d2 = probe(a2);
  }

  const SlopeProbe* best = &result.probes.front();
  for (const SlopeProbe& p : result.probes)
    if (std::abs(p.distortion - target) < std::abs(best->distortion - target)) best = &p;
  result.alpha = best->alpha;
  result.distortion = best->distortion;
  result.converged = within(best->distortion);
  return result;
}

/// Bayes decision against the window-count estimate: for each position,
/// x_hat minimizes sum_y Q(window, y) * loss(x_hat, y), where Q counts
/// (cyclic window of z, quantized symbol) pairs.  Ties pick the smallest
/// symbol.
inline Sequence derandomize(std::span<const Symbol> z, std::span<const Symbol> y, int m,
                            const DistortionMatrix& loss, int alphabet) {
  if (z.size() != y.size()) throw std::invalid_argument("derandomize: length mismatch");
  if (m < 0) throw std::invalid_argument("derandomize: negative half-window");
  const auto n = static_cast<std::int64_t>(z.size());
  const auto a = static_cast<std::size_t>(alphabet);

  auto window_key = [&](std::int64_t i) {
    std::uint64_t key = 0;
    std::uint64_t w = 1;
    for (int j = -m; j <= m; ++j) {
      std::int64_t p = (i + j) % n;
      if (p < 0) p += n;
      key += static_cast<std::uint64_t>(z[static_cast<std::size_t>(p)]) * w;
      w *= alphabet;
    }
    return key;
  };

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> q;
  for (std::int64_t i = 0; i < n; ++i) {
    auto& counts = q[window_key(i)];
    if (counts.empty()) counts.assign(a, 0);
    counts[y[static_cast<std::size_t>(i)]] += 1;
  }

  Sequence xhat(z.size());
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& counts = q[window_key(i)];
    double best_cost = std::numeric_limits<double>::infinity();
    Symbol best_sym = 0;
    for (std::size_t cand = 0; cand < a; ++cand) {
      double cost = 0.0;
      for (std::size_t yy = 0; yy < a; ++yy)
        cost += static_cast<double>(counts[yy]) *
                loss(static_cast<Symbol>(cand), static_cast<Symbol>(yy));
      if (cost < best_cost) {
        best_cost = cost;
        best_sym = static_cast<Symbol>(cand);
      }
    }
    xhat[static_cast<std::size_t>(i)] = best_sym;
  }
  return xhat;
}

/// Symbol-wise MAP for a binary symmetric Markov prior observed through a
/// BSC, via scaled forward-backward recursions.  The optimal non-universal
/// reference.
inline Sequence bayes_fb(std::span<const Symbol> z, double markov_p, double delta) {
  if (markov_p < 0.0 || markov_p > 1.0) throw std::invalid_argument("bayes_fb: bad markov_p");
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("bayes_fb: bad delta");
  const std::size_t n = z.size();
  if (n == 0) return {};
  const double like[2][2] = {{1.0 - delta, delta}, {delta, 1.0 - delta}};  // [x][z]
  const double trans[2][2] = {{1.0 - markov_p, markov_p}, {markov_p, 1.0 - markov_p}};

  std::vector<std::array<double, 2>> fwd(n), bwd(n);
  fwd[0] = {0.5 * like[0][z[0]], 0.5 * like[1][z[0]]};
  auto normalize = [](std::array<double, 2>& v) {
    const double s = v[0] + v[1];
    if (s > 0.0) {
      v[0] /= s;
      v[1] /= s;
    }
  };
  normalize(fwd[0]);
  for (std::size_t i = 1; i < n; ++i) {
    for (int x = 0; x < 2; ++x)
      fwd[i][x] = like[x][z[i]] * (fwd[i - 1][0] * trans[0][x] + fwd[i - 1][1] * trans[1][x]);
    normalize(fwd[i]);
  }
  bwd[n - 1] = {1.0, 1.0};
  for (std::size_t i = n - 1; i-- > 0;) {
    for (int x = 0; x < 2; ++x)
      bwd[i][x] = trans[x][0] * like[0][z[i + 1]] * bwd[i + 1][0] +
                  trans[x][1] * like[1][z[i + 1]] * bwd[i + 1][1];
    normalize(bwd[i]);
  }
  Sequence xhat(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p0 = fwd[i][0] * bwd[i][0];
    const double p1 = fwd[i][1] * bwd[i][1];
    xhat[i] = p1 > p0 ? 1 : 0;  // tie -> smaller symbol
  }
  return xhat;
}

struct DenoiserConfig {
  NoiseModel noise;
  ContextShape shape;
  Schedule schedule;
  std::uint64_t seed = 1;
  std::uint64_t iteration_multiplier = 10;  // final run length = multiplier * n
  int window_m = 4;
  DistortionMatrix loss = DistortionMatrix::hamming(2);
  SlopeSearchConfig slope;  // shape/schedule/seed fields are overridden below
  double alpha_override = -1.0;  // >= 0 skips the slope search
};

struct DenoiseResult {
  Sequence xhat;
  Sequence quantized;
  SlopeResult slope;
  double alpha = 0.0;
};

/// Full pipeline: slope search, annealed quantization of the noisy signal
/// under the difference distortion, then de-randomization.
inline DenoiseResult denoise(std::span<const Symbol> z, const DenoiserConfig& cfg) {
  DenoiseResult result;
  if (cfg.alpha_override >= 0.0) {
    result.alpha = cfg.alpha_override;
  } else {
    SlopeSearchConfig sc = cfg.slope;
    sc.shape = cfg.shape;
    sc.schedule = cfg.schedule;
    sc.seed = cfg.seed;
    result.slope = slope_search(z, cfg.noise, sc);
    result.alpha = result.slope.alpha;
  }
  const DistortionMatrix rho = difference_distortion(cfg.noise);
  AnnealerConfig run{EnergySpec(result.alpha, cfg.shape, rho, Boundary::linear), cfg.schedule,
                     cfg.iteration_multiplier * z.size(), cfg.seed + 1000};
  AnnealResult annealed = anneal(z, run);
  result.quantized = std::move(annealed.output);
  result.xhat = derandomize(z, result.quantized, cfg.window_m, cfg.loss, cfg.noise.m);
  return result;
}

/// Fraction of positions where two sequences disagree.
inline double symbol_error_rate(std::span<const Symbol> a, std::span<const Symbol> b) {
  if (a.size() != b.size()) throw std::invalid_argument("symbol_error_rate: length mismatch");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i) errors += a[i] != b[i];
  return static_cast<double>(errors) / static_cast<double>(a.size());
}

}  // namespace annlc
