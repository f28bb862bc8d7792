#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "annlc/context_model.hpp"

namespace annlc {

inline int ceil_log2(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("ceil_log2: zero");
  return static_cast<int>(std::bit_width(m - 1));
}

/// Bit container: exact bit count plus big-endian packed bytes (bit i of the
/// stream lives in byte i/8 at bit position 7 - i%8).
struct Bitstream {
  std::uint64_t bit_count = 0;
  std::vector<std::uint8_t> bytes;
};

class BitWriter {
 public:
  void put_bit(bool b) {
    if (stream_.bit_count % 8 == 0) stream_.bytes.push_back(0);
    if (b) stream_.bytes.back() |= static_cast<std::uint8_t>(1u << (7 - stream_.bit_count % 8));
    ++stream_.bit_count;
  }

  /// Low `width` bits of value, most significant first.
  void put_bits(std::uint64_t value, int width) {
    for (int j = width - 1; j >= 0; --j) put_bit((value >> j) & 1u);
  }

  Bitstream take() { return std::move(stream_); }

 private:
  Bitstream stream_;
};

class BitReader {
 public:
  explicit BitReader(const Bitstream& s) : s_(s) {}

  bool get_bit() {
    if (pos_ >= s_.bit_count) throw std::runtime_error("bitstream: read past end");
    const bool b = (s_.bytes[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return b;
  }

  std::uint64_t get_bits(int width) {
    std::uint64_t v = 0;
    for (int j = 0; j < width; ++j) v = (v << 1) | static_cast<std::uint64_t>(get_bit());
    return v;
  }

  std::uint64_t remaining() const { return s_.bit_count - pos_; }

 private:
  const Bitstream& s_;
  std::uint64_t pos_ = 0;
};

/// LZ78 parse of a sequence: phrase j extends dictionary entry `parent` by
/// one innovation symbol.  A trailing partial match is kept separately.
struct Lz78Parse {
  struct Phrase {
    std::uint32_t parent;
    Symbol innovation;
  };
  std::vector<Phrase> phrases;
  bool has_partial = false;
  std::uint32_t partial_node = 0;
};

namespace detail {

constexpr std::uint32_t kNoChild = 0xFFFFFFFFu;

inline Lz78Parse lz78_parse(std::span<const Symbol> y, int alphabet) {
  if (y.empty()) throw std::invalid_argument("lz78: empty sequence");
  if (alphabet < 2) throw std::invalid_argument("lz78: alphabet must be >= 2");
  for (Symbol s : y)
    if (s >= alphabet) throw std::invalid_argument("lz78: symbol out of range");

  Lz78Parse parse;
  std::vector<std::uint32_t> child(static_cast<std::size_t>(alphabet), kNoChild);
  std::uint32_t node = 0;
  for (Symbol s : y) {
    const std::size_t slot = static_cast<std::size_t>(node) * alphabet + s;
    if (child[slot] != kNoChild) {
      node = child[slot];
      continue;
    }
    parse.phrases.push_back({node, s});
    child[slot] = static_cast<std::uint32_t>(parse.phrases.size());
    child.resize(child.size() + static_cast<std::size_t>(alphabet), kNoChild);
    node = 0;
  }
  if (node != 0) {
    parse.has_partial = true;
    parse.partial_node = node;
  }
  return parse;
}

}  // namespace detail

namespace detail {

// Phased-in binary code for a value in [0, count): the cheap prefix of the
// range gets ceil(log2 count) - 1 bits, the rest the full ceil(log2 count).
// Index widths therefore grow with the dictionary but never exceed
// ceil(log2(#phrases so far + 1)).
inline int phasein_width(std::uint64_t v, std::uint64_t count) {
  if (count <= 1) return 0;
  const int w = ceil_log2(count);
  const std::uint64_t u = (std::uint64_t{1} << w) - count;
  return v < u ? w - 1 : w;
}

inline void phasein_put(BitWriter& out, std::uint64_t v, std::uint64_t count) {
  if (count <= 1) return;
  const int w = ceil_log2(count);
  const std::uint64_t u = (std::uint64_t{1} << w) - count;
  if (v < u)
    out.put_bits(v, w - 1);
  else
    out.put_bits(v + u, w);
}

inline std::uint64_t phasein_get(BitReader& in, std::uint64_t count) {
  if (count <= 1) return 0;
  const int w = ceil_log2(count);
  const std::uint64_t u = (std::uint64_t{1} << w) - count;
  std::uint64_t p = in.get_bits(w - 1);
  if (p < u) return p;
  p = (p << 1) | static_cast<std::uint64_t>(in.get_bit());
  return p - u;
}

}  // namespace detail

/// Description length in bits: the j-th phrase spends a phased-in index over
/// the j dictionary entries known so far (at most ceil(log2 j) bits) plus
/// ceil(log2 |Y|) innovation bits; a trailing partial match spends a full
/// ceil(log2(#phrases + 1))-bit index.  lz78_encode adds one terminator flag
/// bit of container framing on top of this.
inline std::uint64_t lz78_length(std::span<const Symbol> y, int alphabet) {
  const Lz78Parse parse = detail::lz78_parse(y, alphabet);
  const int sym_bits = ceil_log2(static_cast<std::uint64_t>(alphabet));
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < parse.phrases.size(); ++j)
    bits += static_cast<std::uint64_t>(detail::phasein_width(parse.phrases[j].parent, j + 1) +
                                       sym_bits);
  if (parse.has_partial) bits += static_cast<std::uint64_t>(ceil_log2(parse.phrases.size() + 1));
  return bits;
}

/// Stream layout: 1 flag bit (1 = a partial-phrase index trails the complete
/// phrases), then the phrases, then the full-width partial index if flagged.
inline Bitstream lz78_encode(std::span<const Symbol> y, int alphabet) {
  const Lz78Parse parse = detail::lz78_parse(y, alphabet);
  const int sym_bits = ceil_log2(static_cast<std::uint64_t>(alphabet));
  BitWriter w;
  w.put_bit(parse.has_partial);
  for (std::size_t j = 0; j < parse.phrases.size(); ++j) {
    detail::phasein_put(w, parse.phrases[j].parent, j + 1);
    w.put_bits(parse.phrases[j].innovation, sym_bits);
  }
  if (parse.has_partial)
    w.put_bits(parse.partial_node, ceil_log2(parse.phrases.size() + 1));
  return w.take();
}

inline Sequence lz78_decode(const Bitstream& bits, int alphabet) {
  if (alphabet < 2) throw std::invalid_argument("lz78: alphabet must be >= 2");
  if (bits.bit_count == 0) throw std::runtime_error("lz78: empty bitstream");
  const int sym_bits = ceil_log2(static_cast<std::uint64_t>(alphabet));
  BitReader r(bits);
  const bool has_partial = r.get_bit();
  // dictionary as (parent, symbol); node 0 is the empty root
  std::vector<std::uint32_t> parent{0};
  std::vector<Symbol> sym{0};
  Sequence out;
  std::vector<Symbol> scratch;

  auto append_node = [&](std::uint32_t node) {
    scratch.clear();
    while (node != 0) {
      scratch.push_back(sym[node]);
      node = parent[node];
    }
    out.insert(out.end(), scratch.rbegin(), scratch.rend());
  };

  while (true) {
    const std::uint64_t count = parent.size();
    const std::uint64_t tail = has_partial ? static_cast<std::uint64_t>(ceil_log2(count)) : 0;
    if (r.remaining() < tail) throw std::runtime_error("lz78: truncated bitstream");
    if (r.remaining() == tail) {
      if (has_partial) {
        const std::uint64_t idx = r.get_bits(static_cast<int>(tail));
        if (idx == 0 || idx >= count) throw std::runtime_error("lz78: bad partial index");
        append_node(static_cast<std::uint32_t>(idx));
      }
      break;
    }
    const std::uint64_t idx = detail::phasein_get(r, count);
    const std::uint64_t s = r.get_bits(sym_bits);
    if (idx >= count) throw std::runtime_error("lz78: phrase index out of range");
    if (s >= static_cast<std::uint64_t>(alphabet)) throw std::runtime_error("lz78: bad symbol");
    append_node(static_cast<std::uint32_t>(idx));
    out.push_back(static_cast<Symbol>(s));
    parent.push_back(static_cast<std::uint32_t>(idx));
    sym.push_back(static_cast<Symbol>(s));
  }
  if (out.empty()) throw std::runtime_error("lz78: empty payload");
  return out;
}

/// Bits needed by the two-part scheme that sends the count matrix, then each
/// context subsequence as a rank within its multinomial type class:
///   sum_b log2 multinomial(n_b; column b) + |Y|^(k+1) ceil(log2 n)
///   + k ceil(log2 |Y|).
/// Multinomial logs are evaluated exactly via lgamma.
inline double enumerative_length(const CountMatrix& cm) {
  const std::size_t n = cm.sequence_length();
  if (n <= cm.shape().order()) throw std::invalid_argument("enumerative_length: n <= k");
  constexpr double kLn2 = 0.6931471805599453;
  double body = 0.0;
  std::uint64_t prev_ctx = 0;
  bool first = true;
  for (const auto& [ctx, s, c] : cm.nonzero_cells()) {
    (void)s;
    body -= std::lgamma(static_cast<double>(c) + 1.0);
    if (first || ctx != prev_ctx) {
      body += std::lgamma(static_cast<double>(cm.context_total(ctx)) + 1.0);
      prev_ctx = ctx;
      first = false;
    }
  }
  const double k = static_cast<double>(cm.shape().order());
  const double header =
      std::pow(static_cast<double>(cm.alphabet()), k + 1.0) *
          static_cast<double>(ceil_log2(static_cast<std::uint64_t>(n))) +
      k * static_cast<double>(ceil_log2(static_cast<std::uint64_t>(cm.alphabet())));
  return body / kLn2 + header;
}

inline double enumerative_length(std::span<const Symbol> y, int k, int alphabet) {
  return enumerative_length(build_counts(y, k, alphabet, Boundary::linear));
}

}  // namespace annlc
