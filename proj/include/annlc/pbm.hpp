#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "annlc/context_model.hpp"

namespace annlc {

/// Binary raster, row-major, 1 = black per the PBM convention.
struct Image2D {
  std::size_t width = 0;
  std::size_t height = 0;
  Sequence pixels;

  Symbol at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
  std::size_t size() const { return width * height; }
};

namespace detail {

inline int pbm_next_token_char(std::istream& in) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      return c;
    }
  }
  return EOF;
}

inline std::uint64_t pbm_read_uint(std::istream& in) {
  int c = pbm_next_token_char(in);
  if (c == EOF || !std::isdigit(c)) throw std::runtime_error("pbm: expected integer");
  std::uint64_t v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    c = in.get();
  }
  return v;
}

}  // namespace detail

inline Image2D read_pbm(std::istream& in) {
  char p = 0, type = 0;
  in.get(p);
  in.get(type);
  if (p != 'P' || (type != '1' && type != '4')) throw std::runtime_error("pbm: not a P1/P4 file");
  Image2D img;
  img.width = detail::pbm_read_uint(in);
  img.height = detail::pbm_read_uint(in);
  if (img.width == 0 || img.height == 0) throw std::runtime_error("pbm: zero dimension");
  img.pixels.resize(img.width * img.height);

  if (type == '1') {
    for (auto& px : img.pixels) {
      int c = detail::pbm_next_token_char(in);
      if (c != '0' && c != '1') throw std::runtime_error("pbm: bad P1 pixel");
      px = static_cast<Symbol>(c - '0');
    }
  } else {
    // P4: single whitespace after the header, then packed rows (MSB first,
    // each row padded to a byte boundary)
    const std::size_t row_bytes = (img.width + 7) / 8;
    std::vector<char> row(row_bytes);
    for (std::size_t r = 0; r < img.height; ++r) {
      in.read(row.data(), static_cast<std::streamsize>(row_bytes));
      if (static_cast<std::size_t>(in.gcount()) != row_bytes)
        throw std::runtime_error("pbm: truncated P4 raster");
      for (std::size_t c = 0; c < img.width; ++c) {
        const auto byte = static_cast<std::uint8_t>(row[c / 8]);
        img.pixels[r * img.width + c] = (byte >> (7 - c % 8)) & 1u;
      }
    }
  }
  return img;
}

inline Image2D read_pbm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pbm: cannot open " + path);
  return read_pbm(in);
}

inline void write_pbm(std::ostream& out, const Image2D& img, bool binary = true) {
  if (img.pixels.size() != img.width * img.height) throw std::invalid_argument("pbm: bad raster");
  if (binary) {
    out << "P4\n" << img.width << " " << img.height << "\n";
    const std::size_t row_bytes = (img.width + 7) / 8;
    std::vector<char> row(row_bytes);
    for (std::size_t r = 0; r < img.height; ++r) {
      std::fill(row.begin(), row.end(), 0);
      for (std::size_t c = 0; c < img.width; ++c)
        if (img.pixels[r * img.width + c])
          row[c / 8] = static_cast<char>(row[c / 8] | (1 << (7 - c % 8)));
      out.write(row.data(), static_cast<std::streamsize>(row_bytes));
    }
  } else {
    out << "P1\n" << img.width << " " << img.height << "\n";
    for (std::size_t r = 0; r < img.height; ++r) {
      for (std::size_t c = 0; c < img.width; ++c) {
        out << int{img.pixels[r * img.width + c]};
        out << (c + 1 == img.width ? '\n' : ' ');
      }
    }
  }
}

inline void write_pbm_file(const std::string& path, const Image2D& img, bool binary = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pbm: cannot open " + path + " for writing");
  write_pbm(out, img, binary);
}

/// Default 2-D causal context used for rasters: W, WW, NW, N, NE, NN.
inline std::vector<std::pair<int, int>> default_raster_context() {
  return {{0, -1}, {0, -2}, {-1, -1}, {-1, 0}, {-1, 1}, {-2, 0}};
}

}  // namespace annlc
