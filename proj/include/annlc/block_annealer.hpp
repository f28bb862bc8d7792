#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "annlc/context_model.hpp"
#include "annlc/energy.hpp"
#include "annlc/rng.hpp"
#include "annlc/schedule.hpp"

namespace annlc {

struct TracePoint {
  std::uint64_t t;
  double hk_bits;
  double distortion;
  double energy;
};

/// Per-sweep samples of (H_k, d_n, E) along an annealing run.  Every row is
/// re-derived from the integer counts, so E = n*(H_k + alpha*d_n) holds at
/// each sample by construction.
struct RunTrace {
  std::uint64_t stride = 0;
  std::vector<TracePoint> points;
};

struct AnnealerConfig {
  EnergySpec spec;
  Schedule schedule;
  std::uint64_t iterations;
  std::uint64_t seed;
  std::uint64_t trace_stride = 0;     // 0 = no trace rows
  const Sequence* init = nullptr;     // defaults to a copy of the source
};

struct AnnealResult {
  Sequence output;
  RunTrace trace;
  double hk_bits;
  double distortion;
  double energy;
};

namespace detail {

// Everything a candidate evaluation at position i needs, gathered once.
struct FlipSite {
  bool counted_self = false;
  std::uint64_t self_ctx = 0;
  struct Dep {
    std::uint64_t old_key;
    Symbol sym;
    std::uint64_t weight;
  };
  std::vector<Dep> deps;

  void gather(const CountMatrix& cm, std::span<const Symbol> y, std::size_t i) {
    deps.clear();
    counted_self = cm.position_counted(i);
    if (counted_self) self_ctx = cm.context_key(y, i);
    const auto off = cm.shape().offsets();
    const auto sn = static_cast<std::int64_t>(y.size());
    for (std::size_t j = 0; j < off.size(); ++j) {
      std::int64_t p = static_cast<std::int64_t>(i) - off[j];
      if (cm.boundary() == Boundary::cyclic) {
        p %= sn;
        if (p < 0) p += sn;
      } else if (p >= sn) {
        continue;
      }
      const auto up = static_cast<std::size_t>(p);
      if (!cm.position_counted(up)) continue;
      deps.push_back({cm.context_key(y, up), y[up], cm.symbol_weight(j)});
    }
  }

  void changes_for(Symbol cur, Symbol b, std::vector<CellChange>& out) const {
    out.clear();
    if (counted_self) {
      out.push_back({self_ctx, cur, -1});
      out.push_back({self_ctx, b, +1});
    }
    const std::uint64_t shift = static_cast<std::uint64_t>(b) - static_cast<std::uint64_t>(cur);
    for (const Dep& d : deps) {
      out.push_back({d.old_key, d.sym, -1});
      out.push_back({d.old_key + shift * d.weight, d.sym, +1});
    }
  }
};

struct GibbsWorkspace {
  FlipSite site;
  std::vector<CellChange> changes;
  std::vector<double> delta_e;
  std::vector<double> pmf;
};

// Fills ws.pmf with the Gibbs conditional at position i and temperature 1/beta.
inline void gibbs_conditional_into(const CountMatrix& cm, std::span<const Symbol> y,
                                   std::size_t i, double beta, std::span<const Symbol> x,
                                   const EnergySpec& spec, GibbsWorkspace& ws) {
  const int a = spec.dist.recon_alphabet();
  const double scale = static_cast<double>(y.size()) / static_cast<double>(cm.total());
  const Symbol cur = y[i];
  ws.delta_e.assign(static_cast<std::size_t>(a), 0.0);
  ws.site.gather(cm, y, i);
  for (int b = 0; b < a; ++b) {
    if (static_cast<Symbol>(b) == cur) continue;
    ws.site.changes_for(cur, static_cast<Symbol>(b), ws.changes);
    const double dmass = cm.entropy_mass_delta(ws.changes);
    ws.delta_e[static_cast<std::size_t>(b)] =
        scale * dmass + spec.alpha * (spec.dist(x[i], static_cast<Symbol>(b)) - spec.dist(x[i], cur));
  }
  // log-domain with max-subtraction; beta * dE can be far below exp() range
  double max_log = -std::numeric_limits<double>::infinity();
  ws.pmf.resize(static_cast<std::size_t>(a));
  for (int b = 0; b < a; ++b) {
    ws.pmf[static_cast<std::size_t>(b)] = -beta * ws.delta_e[static_cast<std::size_t>(b)];
    max_log = std::max(max_log, ws.pmf[static_cast<std::size_t>(b)]);
  }
  double z = 0.0;
  for (double& w : ws.pmf) {
    w = std::exp(w - max_log);
    z += w;
  }
  for (double& w : ws.pmf) w /= z;
}

}  // namespace detail

/// Conditional pmf of the reconstruction symbol at position i under the
/// Boltzmann law at inverse temperature beta, given the rest of y.
inline std::vector<double> gibbs_conditional(const CountMatrix& cm, std::span<const Symbol> y,
                                             std::size_t i, double beta,
                                             std::span<const Symbol> x, const EnergySpec& spec) {
  if (beta < 0.0) throw std::invalid_argument("gibbs_conditional: beta must be >= 0");
  detail::GibbsWorkspace ws;
  detail::gibbs_conditional_into(cm, y, i, beta, x, spec, ws);
  return ws.pmf;
}

/// Annealed Gibbs sampling over reconstruction sequences.  Starting from the
/// source copy (or a caller-supplied warm start), each iteration picks a
/// uniform position and resamples its symbol from the exact conditional at
/// the scheduled temperature.  Deterministic given the seed.
inline AnnealResult anneal(std::span<const Symbol> x, const AnnealerConfig& cfg) {
  const std::size_t n = x.size();
  Sequence y = cfg.init ? *cfg.init : Sequence(x.begin(), x.end());
  if (y.size() != n) throw std::invalid_argument("anneal: init length mismatch");

  CountMatrix cm(y, cfg.spec.dist.recon_alphabet(), cfg.spec.shape, cfg.spec.mode);
  Rng pos_rng(cfg.seed, 0);
  Rng sym_rng(cfg.seed, 1);
  detail::GibbsWorkspace ws;

  AnnealResult result;
  result.trace.stride = cfg.trace_stride;
  auto emit = [&](std::uint64_t t) {
    const double hk = cm.conditional_entropy();
    const double d = distortion(x, y, cfg.spec.dist);
    result.trace.points.push_back(
        {t, hk, d, static_cast<double>(n) * (hk + cfg.spec.alpha * d)});
  };
  if (cfg.trace_stride > 0) emit(0);

  for (std::uint64_t t = 1; t <= cfg.iterations; ++t) {
    const std::size_t i = static_cast<std::size_t>(pos_rng.uniform_below(n));
    const double beta = cfg.schedule.beta(t);
    detail::gibbs_conditional_into(cm, y, i, beta, x, cfg.spec, ws);
    const Symbol b = static_cast<Symbol>(sym_rng.sample_pmf(ws.pmf));
    if (b != y[i]) cm.apply_flip(y, i, b);
    if (cfg.trace_stride > 0 && t % cfg.trace_stride == 0) emit(t);
  }
  if (cfg.trace_stride > 0 && cfg.iterations % cfg.trace_stride != 0) emit(cfg.iterations);

  result.hk_bits = cm.conditional_entropy();
  result.distortion = distortion(x, y, cfg.spec.dist);
  result.energy = static_cast<double>(n) * (result.hk_bits + cfg.spec.alpha * result.distortion);
  result.output = std::move(y);
  return result;
}

struct ExhaustiveResult {
  Sequence minimizer;
  double min_energy;
};

/// Global minimizer of n*[H_k(y) + alpha*d_n(x,y)] by full enumeration, in
/// lexicographic order so exact ties resolve to the smallest sequence.
/// Refuses instances with n*log2(alphabet) > 24.
inline ExhaustiveResult exhaustive_search(std::span<const Symbol> x, const EnergySpec& spec) {
  const std::size_t n = x.size();
  const int a = spec.dist.recon_alphabet();
  if (static_cast<double>(n) * std::log2(static_cast<double>(a)) > 24.0 + 1e-9)
    throw std::length_error("exhaustive_search: instance too large");
  Sequence y(n, 0);
  ExhaustiveResult best;
  best.min_energy = std::numeric_limits<double>::infinity();
  while (true) {
    const double e = energy(y, x, spec);
    if (e < best.min_energy) {
      best.min_energy = e;
      best.minimizer = y;
    }
    // odometer increment, least-significant digit last
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (y[pos] + 1 < a) {
        ++y[pos];
        std::fill(y.begin() + static_cast<std::ptrdiff_t>(pos) + 1, y.end(), Symbol{0});
        break;
      }
      if (pos == 0) return best;
    }
  }
}

}  // namespace annlc
