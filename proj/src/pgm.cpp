#include "fockscope/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fockscope {

GrayImage gray_from_values(const std::vector<double>& values, int width,
                           int height, double lo, double hi, int maxval) {
  if (static_cast<std::size_t>(width) * height != values.size()) {
    throw std::invalid_argument("value grid does not match the dimensions");
  }
  if (!(hi > lo)) throw std::invalid_argument("empty value range");
  if (maxval < 1 || maxval > 65535) {
    throw std::invalid_argument("maxval must lie in [1, 65535]");
  }
  GrayImage image;
  image.width = width;
  image.height = height;
  image.maxval = maxval;
  image.pixels.resize(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double t = (values[k] - lo) / (hi - lo);
    const double g = std::round(std::clamp(t, 0.0, 1.0) * maxval);
    image.pixels[k] = static_cast<std::uint16_t>(g);
  }
  return image;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image,
               bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << (binary ? "P5" : "P2") << "\n";
  if (!image.comment.empty()) out << "# " << image.comment << "\n";
  out << image.width << " " << image.height << "\n" << image.maxval << "\n";
  if (binary) {
    const bool wide = image.maxval > 255;
    for (std::uint16_t v : image.pixels) {
      if (wide) out.put(static_cast<char>(v >> 8));  // most significant first
      out.put(static_cast<char>(v & 0xFF));
    }
  } else {
    for (int j = 0; j < image.height; ++j) {
      for (int i = 0; i < image.width; ++i) {
        if (i) out << ' ';
        out << image.pixels[static_cast<std::size_t>(j) * image.width + i];
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

int next_header_number(std::istream& in) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF) throw std::runtime_error("truncated PGM header");
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    c = in.get();
  }
  return value;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5')) {
    throw std::runtime_error("not a PGM file: " + path.string());
  }
  const bool binary = magic[1] == '5';
  GrayImage image;
  image.width = next_header_number(in);
  image.height = next_header_number(in);
  image.maxval = next_header_number(in);
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  image.pixels.resize(n);
  if (binary) {
    const bool wide = image.maxval > 255;
    for (std::size_t k = 0; k < n; ++k) {
      const int hi = wide ? in.get() : 0;
      const int lo = in.get();
      if (lo == EOF || (wide && hi == EOF)) {
        throw std::runtime_error("truncated PGM data");
      }
      image.pixels[k] = static_cast<std::uint16_t>((hi << 8) | lo);
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      int v;
      if (!(in >> v)) throw std::runtime_error("truncated PGM data");
      image.pixels[k] = static_cast<std::uint16_t>(v);
    }
  }
  return image;
}

}  // namespace fockscope
