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

/// A sliding-block map of window length 2*k_f+1, tabulated as a vector
/// indexed by the packed window value sum_j b_j * |X|^j (leftmost window
/// symbol least significant).
struct SBCode {
  int k_f;
  int alphabet;
  std::vector<Symbol> f;

  SBCode(int half_window, int alpha_size)
      : k_f(half_window), alphabet(alpha_size), f(table_size_for(half_window, alpha_size), 0) {
    if (k_f < 0) throw std::invalid_argument("SBCode: negative half-window");
  }

  static std::size_t table_size_for(int k_f, int alphabet) {
    std::size_t k = 1;
    for (int j = 0; j < 2 * k_f + 1; ++j) k *= static_cast<std::size_t>(alphabet);
    return k;
  }

  /// f(b) = center symbol of the window; applying it reproduces the input.
  static SBCode identity(int k_f, int alphabet) {
    SBCode code(k_f, alphabet);
    std::size_t center_weight = 1;
    for (int j = 0; j < k_f; ++j) center_weight *= static_cast<std::size_t>(alphabet);
    for (std::size_t i = 0; i < code.f.size(); ++i)
      code.f[i] = static_cast<Symbol>((i / center_weight) % static_cast<std::size_t>(alphabet));
    return code;
  }

  std::size_t table_size() const { return f.size(); }
  int window_length() const { return 2 * k_f + 1; }
};

using LabelSequence = std::vector<std::uint32_t>;

/// Label of each position = packed value of its symmetric window (cyclic).
inline LabelSequence label_sequence(std::span<const Symbol> x, int k_f, int alphabet) {
  const auto n = static_cast<std::int64_t>(x.size());
  if (n == 0) throw std::invalid_argument("label_sequence: empty sequence");
  LabelSequence labels(x.size());
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint64_t key = 0;
    std::uint64_t w = 1;
    for (int j = -k_f; j <= k_f; ++j) {
      std::int64_t p = (i + j) % n;
      if (p < 0) p += n;
      key += static_cast<std::uint64_t>(x[static_cast<std::size_t>(p)]) * w;
      w *= static_cast<std::uint64_t>(alphabet);
    }
    labels[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(key);
  }
  return labels;
}

inline Sequence apply_sb(std::span<const Symbol> x, const SBCode& code) {
  const LabelSequence labels = label_sequence(x, code.k_f, code.alphabet);
  Sequence y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = code.f[labels[i]];
  return y;
}

/// Position lists per label, built once from the label sequence (labels
/// depend only on x and never change during annealing).
struct LabelIndex {
  std::vector<std::vector<std::uint32_t>> positions;

  LabelIndex(const LabelSequence& labels, std::size_t table_size) : positions(table_size) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      positions[labels[i]].push_back(static_cast<std::uint32_t>(i));
  }

  std::size_t largest_class() const {
    std::size_t m = 0;
    for (const auto& v : positions) m = std::max(m, v.size());
    return m;
  }
};

namespace detail {

// Cell changes for setting every position of one label class to `theta`.
// `y` is the current reconstruction; the class's current symbol is y at any
// class position (all equal by construction).
inline void collect_bulk_changes(const CountMatrix& cm, std::span<const Symbol> y,
                                 std::span<const std::uint32_t> labels, std::uint32_t label,
                                 Symbol theta, std::span<const std::uint32_t> class_positions,
                                 std::vector<CellChange>& out) {
  out.clear();
  if (class_positions.empty()) return;
  const auto n = static_cast<std::int64_t>(y.size());
  const auto off = cm.shape().offsets();

  thread_local std::vector<std::uint32_t> marked;
  marked.clear();
  for (std::uint32_t p : class_positions) {
    marked.push_back(p);
    for (std::int64_t o : off) {
      std::int64_t q = (static_cast<std::int64_t>(p) - o) % n;
      if (q < 0) q += n;
      marked.push_back(static_cast<std::uint32_t>(q));
    }
  }
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());

  auto substituted = [&](std::int64_t idx) -> Symbol {
    const auto u = static_cast<std::size_t>(idx);
    return labels[u] == label ? theta : y[u];
  };
  for (std::uint32_t q : marked) {
    const std::uint64_t old_key = cm.context_key(y, q);
    std::uint64_t new_key = 0;
    for (std::size_t j = 0; j < off.size(); ++j) {
      std::int64_t p = (static_cast<std::int64_t>(q) + off[j]) % n;
      if (p < 0) p += n;
      new_key += static_cast<std::uint64_t>(substituted(p)) * cm.symbol_weight(j);
    }
    const Symbol old_sym = y[q];
    const Symbol new_sym = substituted(q);
    if (old_key == new_key && old_sym == new_sym) continue;
    out.push_back({old_key, old_sym, -1});
    out.push_back({new_key, new_sym, +1});
  }
}

}  // namespace detail

/// Batch update: set the code entry for `label` to theta, flipping all
/// positions of that label class simultaneously and keeping the count matrix
/// consistent.  Cost is proportional to (class size) * (context order).
/// Returns ΔH_k in bits.
inline double sb_flip_update(CountMatrix& cm, std::span<Symbol> y,
                             std::span<const std::uint32_t> labels,
                             std::span<const std::uint32_t> class_positions, std::uint32_t label,
                             Symbol theta) {
  if (class_positions.empty()) return 0.0;
  if (y[class_positions.front()] == theta) return 0.0;
  thread_local std::vector<CellChange> changes;
  detail::collect_bulk_changes(cm, y, labels, label, theta, class_positions, changes);
  const double dg = cm.apply_changes(changes);
  for (std::uint32_t p : class_positions) y[p] = theta;
  return dg / static_cast<double>(cm.total());
}

/// Worst-case energy swing of a single code-coordinate change, bounded by the
/// largest label class times the per-flip bound.
inline double sb_delta_bound(std::size_t n, std::size_t k, double alpha, int alphabet,
                             double max_distortion, std::size_t largest_class) {
  return static_cast<double>(largest_class) * delta_bound(n, k, alpha, alphabet, max_distortion);
}

struct SBAnnealerConfig {
  int k_f;
  ContextShape shape;
  double alpha;
  DistortionMatrix dist;
  Schedule schedule;
  std::uint64_t iterations;
  std::uint64_t seed;
};

struct SBAnnealResult {
  SBCode code;
  Sequence output;
  double hk_bits;
  double distortion;
  double energy;
};

/// Gibbs sampling over code coordinates: each iteration picks a uniform code
/// entry and resamples it from the Boltzmann conditional induced by the
/// energy of the coded sequence.  Deterministic given the seed.
inline SBAnnealResult sb_anneal(std::span<const Symbol> x, const SBAnnealerConfig& cfg) {
  const int a = cfg.dist.recon_alphabet();
  SBCode code = SBCode::identity(cfg.k_f, a);
  const LabelSequence labels = label_sequence(x, cfg.k_f, a);
  const LabelIndex index(labels, code.table_size());
  const std::size_t kf_size = code.table_size();

  Sequence y = apply_sb(x, code);
  CountMatrix cm(y, a, cfg.shape, Boundary::cyclic);
  const double scale = static_cast<double>(y.size()) / static_cast<double>(cm.total());

  // per-class distortion sums against every candidate symbol
  std::vector<double> class_dist(kf_size * static_cast<std::size_t>(a), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int c = 0; c < a; ++c)
      class_dist[labels[i] * static_cast<std::size_t>(a) + static_cast<std::size_t>(c)] +=
          cfg.dist(x[i], static_cast<Symbol>(c));

  Rng pos_rng(cfg.seed, 0);
  Rng sym_rng(cfg.seed, 1);
  std::vector<CellChange> changes;
  std::vector<double> pmf(static_cast<std::size_t>(a));

  for (std::uint64_t t = 1; t <= cfg.iterations; ++t) {
    const auto label = static_cast<std::uint32_t>(pos_rng.uniform_below(kf_size));
    const double beta = cfg.schedule.beta(t);
    const Symbol cur = code.f[label];
    const auto& cls = index.positions[label];

    double max_log = 0.0;
    for (int c = 0; c < a; ++c) {
      double de = 0.0;
      if (static_cast<Symbol>(c) != cur && !cls.empty()) {
        detail::collect_bulk_changes(cm, y, labels, label, static_cast<Symbol>(c), cls, changes);
        de = scale * cm.entropy_mass_delta(changes) +
             cfg.alpha * (class_dist[label * static_cast<std::size_t>(a) + static_cast<std::size_t>(c)] -
                          class_dist[label * static_cast<std::size_t>(a) + cur]);
      }
      pmf[static_cast<std::size_t>(c)] = -beta * de;
      max_log = std::max(max_log, pmf[static_cast<std::size_t>(c)]);
    }
    double z = 0.0;
    for (double& w : pmf) {
      w = std::exp(w - max_log);
      z += w;
    }
    for (double& w : pmf) w /= z;

    const Symbol theta = static_cast<Symbol>(sym_rng.sample_pmf(pmf));
    if (theta != cur) {
      sb_flip_update(cm, y, labels, cls, label, theta);
      code.f[label] = theta;
    }
  }

  SBAnnealResult result{std::move(code), {}, 0.0, 0.0, 0.0};
  result.hk_bits = cm.conditional_entropy();
  result.distortion = distortion(x, y, cfg.dist);
  result.energy =
      static_cast<double>(x.size()) * (result.hk_bits + cfg.alpha * result.distortion);
  result.output = std::move(y);
  return result;
}

struct SBExhaustiveResult {
  SBCode code;
  double min_energy;
};

/// Minimum-energy SB code by enumerating the whole code space (cyclic
/// counts).  Refuses when table_size * log2(alphabet) exceeds 30.
inline SBExhaustiveResult sb_exhaustive_search(std::span<const Symbol> x, int k_f,
                                               const ContextShape& shape, double alpha,
                                               const DistortionMatrix& dist) {
  const int a = dist.recon_alphabet();
  SBCode code(k_f, a);
  if (static_cast<double>(code.table_size()) * std::log2(static_cast<double>(a)) > 30.0 + 1e-9)
    throw std::length_error("sb_exhaustive_search: code space too large");
  const EnergySpec spec(alpha, shape, dist, Boundary::cyclic);

  SBExhaustiveResult best{code, std::numeric_limits<double>::infinity()};
  while (true) {
    const Sequence y = apply_sb(x, code);
    const double e = energy(y, x, spec);
    if (e < best.min_energy) {
      best.min_energy = e;
      best.code = code;
    }
    std::size_t pos = code.f.size();
    bool done = true;
    while (pos > 0) {
      --pos;
      if (code.f[pos] + 1 < a) {
        ++code.f[pos];
        std::fill(code.f.begin() + static_cast<std::ptrdiff_t>(pos) + 1, code.f.end(), Symbol{0});
        done = false;
        break;
      }
      code.f[pos] = 0;
    }
    if (done) return best;
  }
}

}  // namespace annlc
