#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fockscope {

/// Grayscale raster for portable graymap output; maxval up to 65535.
struct GrayImage {
  int width = 0;
  int height = 0;
  int maxval = 65535;
  std::vector<std::uint16_t> pixels;  // row-major

  std::string comment;  // written as a header comment line
};

/// Map per-pixel values linearly from [lo, hi] onto [0, maxval], clamping
/// values outside the range.
GrayImage gray_from_values(const std::vector<double>& values, int width,
                           int height, double lo, double hi,
                           int maxval = 65535);

/// Write P2 (ASCII, the default for diffable outputs) or P5 (binary).
void write_pgm(const std::filesystem::path& path, const GrayImage& image,
               bool binary = false);

/// Read either format back (arbitrary whitespace/comments in the header).
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace fockscope
