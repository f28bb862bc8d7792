#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace annlc {

using Symbol = std::uint8_t;
using Sequence = std::vector<Symbol>;

enum class Boundary { linear, cyclic };

/// Entropy (bits) of the pmf proportional to a non-negative vector.
/// Returns 0 for the all-zero vector.
inline double entropy_functional(std::span<const double> v) {
  double sum = 0.0;
  for (double c : v) {
    if (c < 0.0) throw std::domain_error("entropy_functional: negative component");
    sum += c;
  }
  if (sum == 0.0) return 0.0;
  double h = 0.0;
  for (double c : v) {
    if (c > 0.0) h += (c / sum) * std::log2(sum / c);
  }
  return h;
}

inline double entropy_functional(std::initializer_list<double> v) {
  return entropy_functional(std::span<const double>(v.begin(), v.size()));
}

/// Ordered list of causal offsets defining the conditioning context of a
/// position.  Offsets are in flat index space and strictly negative, so a
/// context never includes the position itself.  1-D order-k models use
/// offsets -1..-k; 2-D raster shapes map (drow, dcol) to drow*width + dcol.
class ContextShape {
 public:
  ContextShape() = default;

  explicit ContextShape(std::vector<std::int64_t> offsets) : offsets_(std::move(offsets)) {
    for (std::int64_t o : offsets_) {
      if (o >= 0) throw std::invalid_argument("ContextShape: offsets must be negative (causal)");
    }
    for (std::size_t a = 0; a < offsets_.size(); ++a)
      for (std::size_t b = a + 1; b < offsets_.size(); ++b)
        if (offsets_[a] == offsets_[b])
          throw std::invalid_argument("ContextShape: duplicate offset");
  }

  /// The previous `k` symbols, nearest first.
  static ContextShape previous(int k) {
    if (k < 0) throw std::invalid_argument("ContextShape: negative order");
    std::vector<std::int64_t> off(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) off[static_cast<std::size_t>(j)] = -(j + 1);
    return ContextShape(std::move(off));
  }

  /// Raster-order flattening of 2-D (drow, dcol) offsets for a given row width.
  static ContextShape raster(std::span<const std::pair<int, int>> cells, std::int64_t width) {
    if (width <= 0) throw std::invalid_argument("ContextShape: width must be positive");
    std::vector<std::int64_t> off;
    off.reserve(cells.size());
    for (auto [dr, dc] : cells) off.push_back(std::int64_t{dr} * width + dc);
    return ContextShape(std::move(off));
  }

  std::size_t order() const { return offsets_.size(); }
  std::span<const std::int64_t> offsets() const { return offsets_; }

  /// Most negative offset; first counted position in linear mode is -reach().
  std::int64_t reach() const {
    std::int64_t m = 0;
    for (std::int64_t o : offsets_) m = std::min(m, o);
    return m;
  }

 private:
  std::vector<std::int64_t> offsets_;
};

/// One count-cell edit: counts[(context, symbol)] += delta.
struct CellChange {
  std::uint64_t context;
  Symbol symbol;
  std::int32_t delta;
};

/// Count moves induced by one candidate flip, as (remove, add) cell pairs.
/// At most order+1 moves, i.e. 2k+2 cell changes.
struct ContextDelta {
  struct Move {
    std::uint64_t from_context;
    Symbol from_symbol;
    std::uint64_t to_context;
    Symbol to_symbol;
  };
  std::vector<Move> moves;

  std::vector<CellChange> changes() const {
    std::vector<CellChange> out;
    out.reserve(2 * moves.size());
    for (const Move& m : moves) {
      out.push_back({m.from_context, m.from_symbol, -1});
      out.push_back({m.to_context, m.to_symbol, +1});
    }
    return out;
  }
};

/// Empirical context/symbol counts of a sequence, with the machinery for
/// O(k) single-flip updates of the conditional empirical entropy.
///
/// Storage is sparse, keyed by the packed context integer
/// sum_j y[i + offset_j] * |Y|^j, so memory scales with the number of
/// distinct contexts actually present.
///
/// Single-writer; immutable snapshots may be read from multiple threads.
class CountMatrix {
 public:
  CountMatrix(std::span<const Symbol> y, int alphabet, ContextShape shape, Boundary mode)
      : alphabet_(alphabet), shape_(std::move(shape)), mode_(mode), n_(y.size()) {
    if (alphabet_ < 2) throw std::invalid_argument("CountMatrix: alphabet must be >= 2");
    const std::size_t start = first_counted();
    if (n_ <= start || n_ <= shape_.order())
      throw std::invalid_argument("CountMatrix: sequence shorter than context reach");
    for (Symbol s : y) {
      if (s >= alphabet_) throw std::invalid_argument("CountMatrix: symbol out of range");
    }
    if (mode_ == Boundary::cyclic) {
      // offsets must stay distinct modulo n or cells would alias
      const auto off = shape_.offsets();
      for (std::size_t a = 0; a < off.size(); ++a) {
        if (off[a] % static_cast<std::int64_t>(n_) == 0)
          throw std::invalid_argument("CountMatrix: cyclic offset aliases the position itself");
        for (std::size_t b = a + 1; b < off.size(); ++b)
          if ((off[a] - off[b]) % static_cast<std::int64_t>(n_) == 0)
            throw std::invalid_argument("CountMatrix: cyclic offsets alias each other");
      }
    }

    pow_.resize(shape_.order());
    std::uint64_t p = 1;
    for (std::size_t j = 0; j < shape_.order(); ++j) {
      pow_[j] = p;
      p *= static_cast<std::uint64_t>(alphabet_);
    }

    total_ = (mode_ == Boundary::cyclic) ? n_ : n_ - start;
    build_xlog_table();

    for (std::size_t i = (mode_ == Boundary::cyclic) ? 0 : start; i < n_; ++i)
      cell_ref(context_key(y, i), y[i]) += 1;
  }

  int alphabet() const { return alphabet_; }
  const ContextShape& shape() const { return shape_; }
  Boundary boundary() const { return mode_; }
  std::size_t sequence_length() const { return n_; }
  std::uint64_t total() const { return total_; }
  std::size_t distinct_contexts() const { return index_.size(); }

  bool position_counted(std::size_t i) const {
    return mode_ == Boundary::cyclic || i >= first_counted();
  }

  std::uint32_t count(std::uint64_t context, Symbol s) const {
    auto it = index_.find(context);
    if (it == index_.end()) return 0;
    return cells_[it->second * static_cast<std::size_t>(alphabet_) + s];
  }

  std::uint32_t context_total(std::uint64_t context) const {
    auto it = index_.find(context);
    return it == index_.end() ? 0 : sums_[it->second];
  }

  /// Contribution of the j-th shape cell to the packed key: |Y|^j.
  std::uint64_t symbol_weight(std::size_t j) const { return pow_[j]; }

  /// Packed context of position i under this matrix's shape and boundary.
  std::uint64_t context_key(std::span<const Symbol> y, std::size_t i) const {
    const auto off = shape_.offsets();
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < off.size(); ++j)
      key += static_cast<std::uint64_t>(y[wrap(static_cast<std::int64_t>(i) + off[j])]) * pow_[j];
    return key;
  }

  /// Conditional empirical entropy H_k in bits, re-derived from the integer
  /// counts on every call (no cached float state to drift).
  double conditional_entropy() const {
    if (total_ == 0) throw std::domain_error("conditional_entropy: empty count matrix");
    double mass = 0.0;
    for (std::size_t id = 0; id < sums_.size(); ++id) mass += column_entropy_mass(id);
    return mass / static_cast<double>(total_);
  }

  /// Count moves induced by replacing y[i] with b; empty when b == y[i].
  ContextDelta affected_contexts(std::span<const Symbol> y, std::size_t i, Symbol b) const {
    check_consistent_args(y, i, b);
    ContextDelta delta;
    if (b == y[i]) return delta;
    if (position_counted(i)) {
      const std::uint64_t key = context_key(y, i);
      delta.moves.push_back({key, y[i], key, b});
    }
    const auto off = shape_.offsets();
    const auto sn = static_cast<std::int64_t>(n_);
    for (std::size_t j = 0; j < off.size(); ++j) {
      std::int64_t p = static_cast<std::int64_t>(i) - off[j];
      if (mode_ == Boundary::cyclic) {
        p %= sn;
        if (p < 0) p += sn;
      } else if (p >= sn) {
        continue;
      }
      const auto up = static_cast<std::size_t>(p);
      if (!position_counted(up)) continue;
      const std::uint64_t old_key = context_key(y, up);
      const std::uint64_t new_key =
          old_key + (static_cast<std::uint64_t>(b) - static_cast<std::uint64_t>(y[i])) * pow_[j];
      delta.moves.push_back({old_key, y[up], new_key, y[up]});
    }
    return delta;
  }

  /// Change in the entropy mass sum_b g(column_b) (bits) if `changes` were
  /// applied; counts are not modified.
  double entropy_mass_delta(std::span<const CellChange> changes) const {
    thread_local std::vector<CellChange> scratch;
    scratch.assign(changes.begin(), changes.end());
    group_by_context(scratch);
    double dg = 0.0;
    std::size_t a = 0;
    while (a < scratch.size()) {
      std::size_t b = a;
      while (b < scratch.size() && scratch[b].context == scratch[a].context) ++b;
      dg += column_delta(scratch[a].context, std::span<const CellChange>(&scratch[a], b - a));
      a = b;
    }
    return dg;
  }

  /// ΔH_k (bits) if y[i] were flipped to b; no mutation.
  double flip_entropy_delta(std::span<const Symbol> y, std::size_t i, Symbol b) const {
    if (b == y[i]) return 0.0;
    const auto changes = affected_contexts(y, i, b).changes();
    return entropy_mass_delta(changes) / static_cast<double>(total_);
  }

  /// Apply `changes` to the counts.  Returns the entropy mass delta in bits.
  double apply_changes(std::span<const CellChange> changes) {
    thread_local std::vector<CellChange> scratch;
    scratch.assign(changes.begin(), changes.end());
    group_by_context(scratch);
    double dg = 0.0;
    std::size_t a = 0;
    while (a < scratch.size()) {
      std::size_t b = a;
      while (b < scratch.size() && scratch[b].context == scratch[a].context) ++b;
      const std::uint64_t ctx = scratch[a].context;
      const std::size_t id = column_id(ctx);
      dg -= column_entropy_mass(id);
      for (std::size_t c = a; c < b; ++c) {
        auto& cell = cells_[id * static_cast<std::size_t>(alphabet_) + scratch[c].symbol];
        if (scratch[c].delta < 0 && cell < static_cast<std::uint32_t>(-scratch[c].delta))
          throw std::logic_error("CountMatrix: flip would drive a count negative");
        cell = static_cast<std::uint32_t>(static_cast<std::int64_t>(cell) + scratch[c].delta);
        sums_[id] = static_cast<std::uint32_t>(static_cast<std::int64_t>(sums_[id]) + scratch[c].delta);
      }
      dg += column_entropy_mass(id);
      a = b;
    }
    return dg;
  }

  /// Flip y[i] := b, keeping counts consistent.  Returns ΔH_k in bits.
  double apply_flip(std::span<Symbol> y, std::size_t i, Symbol b) {
    if (b == y[i]) return 0.0;
    const auto changes = affected_contexts(y, i, b).changes();
    const double dg = apply_changes(changes);
    y[i] = b;
    return dg / static_cast<double>(total_);
  }

  /// Cell-exact equality (zero columns ignored).
  bool equals(const CountMatrix& other) const {
    if (alphabet_ != other.alphabet_ || total_ != other.total_) return false;
    auto covered_by = [](const CountMatrix& a, const CountMatrix& b) {
      for (const auto& [ctx, id] : a.index_) {
        for (int s = 0; s < a.alphabet_; ++s) {
          if (a.cells_[id * static_cast<std::size_t>(a.alphabet_) + static_cast<std::size_t>(s)] !=
              b.count(ctx, static_cast<Symbol>(s)))
            return false;
        }
      }
      return true;
    };
    return covered_by(*this, other) && covered_by(other, *this);
  }

  /// All (context, symbol, count) triples with count > 0, sorted.
  std::vector<std::tuple<std::uint64_t, Symbol, std::uint32_t>> nonzero_cells() const {
    std::vector<std::tuple<std::uint64_t, Symbol, std::uint32_t>> out;
    for (const auto& [ctx, id] : index_) {
      for (int s = 0; s < alphabet_; ++s) {
        const auto c = cells_[id * static_cast<std::size_t>(alphabet_) + static_cast<std::size_t>(s)];
        if (c > 0) out.emplace_back(ctx, static_cast<Symbol>(s), c);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::size_t first_counted() const { return static_cast<std::size_t>(-shape_.reach()); }

  std::size_t wrap(std::int64_t idx) const {
    if (mode_ == Boundary::cyclic) {
      auto sn = static_cast<std::int64_t>(n_);
      idx %= sn;
      if (idx < 0) idx += sn;
    }
    return static_cast<std::size_t>(idx);
  }

  void check_consistent_args(std::span<const Symbol> y, std::size_t i, Symbol b) const {
    if (y.size() != n_) throw std::invalid_argument("CountMatrix: sequence length mismatch");
    if (i >= n_) throw std::invalid_argument("CountMatrix: position out of range");
    if (b >= alphabet_) throw std::invalid_argument("CountMatrix: symbol out of range");
  }

  void build_xlog_table() {
    const std::size_t cap = static_cast<std::size_t>(total_) + 2 * (shape_.order() + 2);
    if (cap <= (1u << 22)) {
      xlog_.resize(cap + 1);
      xlog_[0] = 0.0;
      for (std::size_t m = 1; m < xlog_.size(); ++m)
        xlog_[m] = static_cast<double>(m) * std::log2(static_cast<double>(m));
    }
  }

  double xlog2x(std::uint64_t m) const {
    if (m < xlog_.size()) return xlog_[m];
    return m == 0 ? 0.0 : static_cast<double>(m) * std::log2(static_cast<double>(m));
  }

  std::size_t column_id(std::uint64_t ctx) {
    auto [it, inserted] = index_.try_emplace(ctx, sums_.size());
    if (inserted) {
      cells_.resize(cells_.size() + static_cast<std::size_t>(alphabet_), 0);
      sums_.push_back(0);
    }
    return it->second;
  }

  std::uint32_t& cell_ref(std::uint64_t ctx, Symbol s) {
    const std::size_t id = column_id(ctx);
    sums_[id] += 1;
    return cells_[id * static_cast<std::size_t>(alphabet_) + s];
  }

  // g(column) = S log2 S - sum_s c_s log2 c_s, so that H_k = sum_b g_b / total
  double column_entropy_mass(std::size_t id) const {
    const std::uint32_t s = sums_[id];
    if (s == 0) return 0.0;
    double g = xlog2x(s);
    const std::size_t base = id * static_cast<std::size_t>(alphabet_);
    for (int a = 0; a < alphabet_; ++a) g -= xlog2x(cells_[base + static_cast<std::size_t>(a)]);
    return g;
  }

  double column_delta(std::uint64_t ctx, std::span<const CellChange> group) const {
    std::uint32_t before[256] = {0};
    std::int64_t after[256];
    std::uint32_t sum_before = 0;
    auto it = index_.find(ctx);
    if (it != index_.end()) {
      const std::size_t base = it->second * static_cast<std::size_t>(alphabet_);
      for (int a = 0; a < alphabet_; ++a) before[a] = cells_[base + static_cast<std::size_t>(a)];
      sum_before = sums_[it->second];
    }
    std::int64_t sum_after = sum_before;
    for (int a = 0; a < alphabet_; ++a) after[a] = before[a];
    for (const CellChange& c : group) {
      after[c.symbol] += c.delta;
      sum_after += c.delta;
      if (after[c.symbol] < 0)
        throw std::logic_error("CountMatrix: flip would drive a count negative");
    }
    double g_before = xlog2x(sum_before);
    double g_after = xlog2x(static_cast<std::uint64_t>(sum_after));
    for (int a = 0; a < alphabet_; ++a) {
      g_before -= xlog2x(before[a]);
      g_after -= xlog2x(static_cast<std::uint64_t>(after[a]));
    }
    if (sum_before == 0) g_before = 0.0;
    if (sum_after == 0) g_after = 0.0;
    return g_after - g_before;
  }

  static void group_by_context(std::vector<CellChange>& v) {
    std::sort(v.begin(), v.end(), [](const CellChange& a, const CellChange& b) {
      return a.context < b.context;
    });
  }

  int alphabet_;
  ContextShape shape_;
  Boundary mode_;
  std::size_t n_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> pow_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<std::uint32_t> cells_;
  std::vector<std::uint32_t> sums_;
  std::vector<double> xlog_;
};

/// Order-k model over the previous k symbols.
inline CountMatrix build_counts(std::span<const Symbol> y, int k, int alphabet,
                                Boundary mode = Boundary::linear) {
  return CountMatrix(y, alphabet, ContextShape::previous(k), mode);
}

inline double conditional_entropy(const CountMatrix& cm) { return cm.conditional_entropy(); }

}  // namespace annlc
