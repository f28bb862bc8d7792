#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "annlc/lossless.hpp"

namespace annlc {

/// Compressed-archive container: fixed header followed by the LZ78 payload.
/// All multi-byte integers are big-endian.  Layout:
///
///   bytes 0..3   magic "ALC1"
///   byte  4      format version (currently 1)
///   byte  5      LZ78 variant id (currently 1)
///   byte  6      alphabet size
///   byte  7      flags, bit 0 = raster (2-D) payload
///   u32          context order used by the encoder (reporting only)
///   u64          sequence length n
///   u32, u32     width, height (only when the raster flag is set)
///   u64          payload bit count
///   bytes        payload, big-endian bit packing
struct ArchiveHeader {
  static constexpr std::uint8_t kVersion = 1;
  static constexpr std::uint8_t kLzVariant = 1;

  std::uint8_t alphabet = 2;
  bool raster = false;
  std::uint32_t context_order = 0;
  std::uint64_t n = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

namespace detail {

inline void write_be(std::ostream& out, std::uint64_t v, int bytes) {
  for (int j = bytes - 1; j >= 0; --j)
    out.put(static_cast<char>((v >> (8 * j)) & 0xFF));
}

inline std::uint64_t read_be(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int j = 0; j < bytes; ++j) {
    const int c = in.get();
    if (c == EOF) throw std::runtime_error("archive: truncated header");
    v = (v << 8) | static_cast<std::uint64_t>(c);
  }
  return v;
}

}  // namespace detail

inline void write_archive(std::ostream& out, const ArchiveHeader& h, const Bitstream& payload) {
  out.write("ALC1", 4);
  out.put(static_cast<char>(ArchiveHeader::kVersion));
  out.put(static_cast<char>(ArchiveHeader::kLzVariant));
  out.put(static_cast<char>(h.alphabet));
  out.put(static_cast<char>(h.raster ? 1 : 0));
  detail::write_be(out, h.context_order, 4);
  detail::write_be(out, h.n, 8);
  if (h.raster) {
    detail::write_be(out, h.width, 4);
    detail::write_be(out, h.height, 4);
  }
  detail::write_be(out, payload.bit_count, 8);
  out.write(reinterpret_cast<const char*>(payload.bytes.data()),
            static_cast<std::streamsize>(payload.bytes.size()));
  if (!out) throw std::runtime_error("archive: write failed");
}

inline std::pair<ArchiveHeader, Bitstream> read_archive(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string(magic, 4) != "ALC1")
    throw std::runtime_error("archive: bad magic");
  const auto version = static_cast<std::uint8_t>(detail::read_be(in, 1));
  if (version != ArchiveHeader::kVersion)
    throw std::runtime_error("archive: unsupported version " + std::to_string(version));
  const auto variant = static_cast<std::uint8_t>(detail::read_be(in, 1));
  if (variant != ArchiveHeader::kLzVariant)
    throw std::runtime_error("archive: unsupported LZ variant " + std::to_string(variant));

  ArchiveHeader h;
  h.alphabet = static_cast<std::uint8_t>(detail::read_be(in, 1));
  h.raster = (detail::read_be(in, 1) & 1) != 0;
  h.context_order = static_cast<std::uint32_t>(detail::read_be(in, 4));
  h.n = detail::read_be(in, 8);
  if (h.raster) {
    h.width = static_cast<std::uint32_t>(detail::read_be(in, 4));
    h.height = static_cast<std::uint32_t>(detail::read_be(in, 4));
    if (static_cast<std::uint64_t>(h.width) * h.height != h.n)
      throw std::runtime_error("archive: raster dimensions disagree with n");
  }
  Bitstream payload;
  payload.bit_count = detail::read_be(in, 8);
  payload.bytes.resize((payload.bit_count + 7) / 8);
  in.read(reinterpret_cast<char*>(payload.bytes.data()),
          static_cast<std::streamsize>(payload.bytes.size()));
  if (static_cast<std::uint64_t>(in.gcount()) != payload.bytes.size())
    throw std::runtime_error("archive: truncated payload");
  return {h, std::move(payload)};
}

inline void write_archive_file(const std::string& path, const ArchiveHeader& h,
                               const Bitstream& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("archive: cannot open " + path + " for writing");
  write_archive(out, h, payload);
}

inline std::pair<ArchiveHeader, Bitstream> read_archive_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("archive: cannot open " + path);
  return read_archive(in);
}

}  // namespace annlc
