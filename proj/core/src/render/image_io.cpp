#include "corrtrans/render/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace corrtrans::render {

namespace {

unsigned char encode(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::lround(255.0 * std::pow(c, 1.0 / 2.2)));
}

}  // namespace

void write_ppm(std::ostream& out, const Image& img, const std::vector<std::string>& comments) {
  out << "P6\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  out << img.width << " " << img.height << "\n255\n";
  std::vector<char> row(img.width * 3);
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) row[3 * x + static_cast<std::size_t>(c)] = static_cast<char>(encode(img.at(x, y)[c]));
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_pfm(std::ostream& out, const Image& img) {
  out << "PF\n" << img.width << " " << img.height << "\n-1.0\n";
  for (std::size_t yy = img.height; yy-- > 0;) {
    for (std::size_t x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(img.at(x, yy)[c]));
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
        out.write(b, 4);
      }
    }
  }
}

Image read_pfm(std::istream& in) {
  std::string magic;
  std::size_t w = 0;
  std::size_t h = 0;
  double scale = 0.0;
  if (!(in >> magic >> w >> h >> scale) || magic != "PF" || w == 0 || h == 0) {
    throw std::runtime_error("not a color PFM file");
  }
  if (scale >= 0.0) throw std::runtime_error("only little-endian PFM is supported");
  in.get();  // single whitespace after the scale
  Image img(w, h);
  for (std::size_t yy = h; yy-- > 0;) {
    for (std::size_t x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        unsigned char b[4];
        if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated PFM data");
        std::uint32_t bits = 0;
        for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        img.at(x, yy)[c] = std::bit_cast<float>(bits);
      }
    }
  }
  return img;
}

}  // namespace corrtrans::render
