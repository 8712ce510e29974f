#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "fockscope/estimators.hpp"

namespace fockscope {

/// Birefringence phase 0.1 + 0.437 cos^6[2(x - pi/2)^2 + y^2] at a sample
/// coordinate; range [0.1, 0.537].
double birefringence_phase(double x, double y);

/// True per-pixel phase grid. Pixel (i, j) with column i and row j maps to
/// x = pi i/(W-1) in [0, pi] and y = 2.4 (j/(H-1) - 1/2) in [-1.2, 1.2];
/// the mapping is part of every image run's metadata.
struct PhaseField {
  int width = 0;
  int height = 0;
  std::vector<double> phase;  // row-major, phase[j * width + i]

  double x_of(int i) const;
  double y_of(int j) const;
  double at(int i, int j) const { return phase[static_cast<std::size_t>(j) * width + i]; }
  int pixels() const { return width * height; }
};

/// Evaluate the field on a W x H grid (defaults follow the 30 x 60 images).
PhaseField build_phase_field(int width = 60, int height = 30);

/// One scan per pixel at the fixed offset phase; estimates by inversion.
struct FixedOffsetStrategy {
  double offset = 0.0;
};

/// Offset fed back from neighboring estimates so every pixel senses the
/// optimal working point.
struct PhaseLockStrategy {
  double theta_min = 0.0;
};

/// Two sequences per pixel (without / with the fixed offset), combined MLE.
struct TwoSequenceStrategy {
  double offset = 0.0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
};

using ScanStrategy =
    std::variant<FixedOffsetStrategy, PhaseLockStrategy, TwoSequenceStrategy>;

struct ScanConfig {
  ScanStrategy strategy;
  std::int64_t shots = 0;  // measurements per pixel (n1 + n2 for two-seq)
  CalibrationCurve curve;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Per-pixel estimate flags. A clamp at the dark-fringe end of the
/// inversion interval (or a degenerate posterior) marks a singular pixel:
/// the measurement landed where the sensitivity diverges and the estimate
/// is a speckle. Clamps at the zero-phase end only mean the rate overshot
/// the curve's peak; the estimate stays near the applied offset.
inline constexpr std::uint8_t kFlagClamped = 1;
inline constexpr std::uint8_t kFlagDegenerate = 2;
inline constexpr std::uint8_t kFlagSingular = 4;

struct ImageEstimate {
  int width = 0;
  int height = 0;
  std::vector<double> phase;          // estimates, row-major
  std::vector<std::uint8_t> flags;    // kFlag* bits
  std::vector<double> offsets;        // offset phase applied at each pixel
  std::vector<double> sigma;          // two-sequence scans only, else empty

  double at(int i, int j) const { return phase[static_cast<std::size_t>(j) * width + i]; }
  int pixels() const { return width * height; }
};

ImageEstimate scan_fixed_offset(const PhaseField& field,
                                const ScanConfig& config);
ImageEstimate scan_phase_lock(const PhaseField& field,
                              const ScanConfig& config);
ImageEstimate scan_two_sequence(const PhaseField& field,
                                const ScanConfig& config);

/// Dispatch on the configured strategy.
ImageEstimate run_scan(const PhaseField& field, const ScanConfig& config);

/// Pixel rectangle [x0, x1) x [y0, y1).
struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  int pixels() const { return (x1 - x0) * (y1 - y0); }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
};

/// Largest rectangle of pixels whose sensed phase offset + phi(i, j) lies
/// within +-band of theta_min (the near-optimal analysis region).
Rect optimal_region(const PhaseField& field, double offset, double theta_min,
                    double band_fraction = 0.25);

/// Standard deviation of (estimate - truth) over the region; the overload
/// pools the error samples of repeated images of the same field.
double local_standard_deviation(const ImageEstimate& image,
                                const PhaseField& field, const Rect& region);
double local_standard_deviation(const std::vector<ImageEstimate>& images,
                                const PhaseField& field, const Rect& region);

/// Whole-image root-mean-square error against the truth; flagged pixels
/// count like any other.
double rmse(const ImageEstimate& image, const PhaseField& field);

/// Pixels with any flag set.
int count_flagged(const ImageEstimate& image);
/// Pixels flagged as singular (dark-fringe clamps and degenerate posteriors).
int count_singular(const ImageEstimate& image);

}  // namespace fockscope
