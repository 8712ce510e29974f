#include "fockscope/microscopy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace fockscope {

namespace {

void for_each_row(int height, int threads, const std::function<void(int)>& body) {
  if (threads <= 1) {
    for (int j = 0; j < height; ++j) body(j);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int j = t; j < height; j += threads) body(j);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

ImageEstimate make_blank(const PhaseField& field) {
  ImageEstimate image;
  image.width = field.width;
  image.height = field.height;
  image.phase.assign(field.phase.size(), 0.0);
  image.flags.assign(field.phase.size(), 0);
  image.offsets.assign(field.phase.size(), 0.0);
  return image;
}

void check_sensed_range(const PhaseField& field, double offset) {
  const auto [lo, hi] =
      std::minmax_element(field.phase.begin(), field.phase.end());
  if (offset + *lo < 0.0 || offset + *hi >= std::numbers::pi) {
    throw std::invalid_argument(
        "offset folds the sensed phase outside [0, pi); the signal is not "
        "invertible there");
  }
}

std::uint8_t flags_of(const PhaseEstimate& est, const PriorInterval& interval) {
  std::uint8_t f = 0;
  if (est.clamped) {
    f |= kFlagClamped;
    // clamped against the dark-fringe end: the speckle case
    if (std::abs(est.value - interval.upper) < 1e-9) f |= kFlagSingular;
  }
  if (est.degenerate) f |= kFlagDegenerate | kFlagSingular;
  return f;
}

}  // namespace

double birefringence_phase(double x, double y) {
  const double dx = x - 0.5 * std::numbers::pi;
  const double c = std::cos(2.0 * dx * dx + y * y);
  const double c2 = c * c;
  return 0.1 + 0.437 * c2 * c2 * c2;
}

double PhaseField::x_of(int i) const {
  return width > 1 ? std::numbers::pi * i / (width - 1) : 0.5 * std::numbers::pi;
}

double PhaseField::y_of(int j) const {
  return height > 1 ? 2.4 * (static_cast<double>(j) / (height - 1) - 0.5) : 0.0;
}

PhaseField build_phase_field(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("field dimensions must be positive");
  }
  PhaseField field;
  field.width = width;
  field.height = height;
  field.phase.resize(static_cast<std::size_t>(width) * height);
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      field.phase[static_cast<std::size_t>(j) * width + i] =
          birefringence_phase(field.x_of(i), field.y_of(j));
    }
  }
  return field;
}

ImageEstimate scan_fixed_offset(const PhaseField& field,
                                const ScanConfig& config) {
  const auto& strategy = std::get<FixedOffsetStrategy>(config.strategy);
  check_sensed_range(field, strategy.offset);

  const RandomSource source(config.seed);
  const PriorInterval interval{0.0, config.curve.theta_dark()};
  ImageEstimate image = make_blank(field);

  for_each_row(field.height, config.threads, [&](int j) {
    for (int i = 0; i < field.width; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * field.width + i;
      const double sensed = strategy.offset + field.phase[k];
      RandomStream stream = source.stream(k);
      const MeasurementRecord record =
          simulate_counts(config.curve.value(sensed), config.shots, stream);
      const PhaseEstimate est =
          invert_signal(config.curve, record.rate(), interval);
      image.phase[k] = est.value - strategy.offset;
      image.offsets[k] = strategy.offset;
      image.flags[k] = flags_of(est, interval);
    }
  });
  return image;
}

ImageEstimate scan_phase_lock(const PhaseField& field,
                              const ScanConfig& config) {
  const auto& strategy = std::get<PhaseLockStrategy>(config.strategy);
  check_sensed_range(field, 0.0);

  const RandomSource source(config.seed);
  const PriorInterval interval{0.0, config.curve.theta_dark()};
  ImageEstimate image = make_blank(field);
  const double theta_min = strategy.theta_min;
  constexpr double kPriorFloor = 0.1;  // known lower edge of the field range

  // Raster order (row-major) so the up/left/up-left estimates exist when a
  // pixel is visited. The offsets keep the sensed phase near theta_min.
  for (int j = 0; j < field.height; ++j) {
    for (int i = 0; i < field.width; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * field.width + i;
      double offset;
      if (i == 0 && j == 0) {
        offset = theta_min - kPriorFloor;
      } else if (j == 0) {
        offset = theta_min - image.at(i - 1, 0);
      } else if (i == 0) {
        offset = theta_min - image.at(0, j - 1);
      } else {
        offset = theta_min - (image.at(i - 1, j) + image.at(i, j - 1) +
                              image.at(i - 1, j - 1)) /
                                 3.0;
      }
      const double sensed = offset + field.phase[k];
      RandomStream stream = source.stream(k);
      const MeasurementRecord record =
          simulate_counts(config.curve.value(sensed), config.shots, stream);
      PhaseEstimate est;
      if (i == 0 && j == 0) {
        // Bootstrap: the prior floor can miss the true corner phase by far
        // enough that the rate drops off the fitted curve's range; the MLE
        // gives the same boundary estimate without an out-of-range clamp.
        est = mle_single(config.curve, record, interval);
        if (est.degenerate) {
          throw std::runtime_error(
              "phase-lock bootstrap failed: degenerate pilot estimate");
        }
      } else {
        est = invert_signal(config.curve, record.rate(), interval);
      }
      image.phase[k] = est.value - offset;
      image.offsets[k] = offset;
      image.flags[k] = flags_of(est, interval);
    }
  }
  return image;
}

ImageEstimate scan_two_sequence(const PhaseField& field,
                                const ScanConfig& config) {
  const auto& strategy = std::get<TwoSequenceStrategy>(config.strategy);
  if (strategy.n1 + strategy.n2 != config.shots) {
    throw std::invalid_argument("sequence split must add up to the shot budget");
  }
  check_sensed_range(field, 0.0);

  const RandomSource source(config.seed);
  const PriorInterval interval{0.0, config.curve.theta_dark()};
  ImageEstimate image = make_blank(field);
  image.sigma.assign(field.phase.size(), 0.0);

  for_each_row(field.height, config.threads, [&](int j) {
    for (int i = 0; i < field.width; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * field.width + i;
      const double truth = field.phase[k];
      RandomStream stream = source.stream(k);
      TwoSequenceRecord data;
      data.offset = strategy.offset;
      if (strategy.n1 > 0) {
        data.base =
            simulate_counts(config.curve.value(truth), strategy.n1, stream);
      }
      if (strategy.n2 > 0) {
        data.offsetted = simulate_counts(
            config.curve.value(truth + strategy.offset), strategy.n2, stream);
      }
      const PhaseEstimate est = mle_combined(config.curve, data, interval);
      image.phase[k] = est.value;
      image.offsets[k] = strategy.offset;
      image.flags[k] = flags_of(est, interval);
      image.sigma[k] = est.sigma.value_or(0.0);
    }
  });
  return image;
}

ImageEstimate run_scan(const PhaseField& field, const ScanConfig& config) {
  if (config.shots < 1) {
    throw std::invalid_argument("scan needs at least one measurement per pixel");
  }
  return std::visit(
      [&](const auto& strategy) -> ImageEstimate {
        using T = std::decay_t<decltype(strategy)>;
        if constexpr (std::is_same_v<T, FixedOffsetStrategy>) {
          return scan_fixed_offset(field, config);
        } else if constexpr (std::is_same_v<T, PhaseLockStrategy>) {
          return scan_phase_lock(field, config);
        } else {
          return scan_two_sequence(field, config);
        }
      },
      config.strategy);
}

Rect optimal_region(const PhaseField& field, double offset, double theta_min,
                    double band_fraction) {
  const double band = band_fraction * theta_min;
  std::vector<char> in_band(field.phase.size());
  for (std::size_t k = 0; k < field.phase.size(); ++k) {
    in_band[k] = std::abs(offset + field.phase[k] - theta_min) <= band;
  }
  // largest all-in-band axis-aligned rectangle (histogram method per row)
  std::vector<int> column_height(field.width, 0);
  Rect best;
  for (int j = 0; j < field.height; ++j) {
    for (int i = 0; i < field.width; ++i) {
      column_height[i] =
          in_band[static_cast<std::size_t>(j) * field.width + i]
              ? column_height[i] + 1
              : 0;
    }
    std::vector<std::pair<int, int>> stack;  // (start column, height)
    for (int i = 0; i <= field.width; ++i) {
      const int h = i < field.width ? column_height[i] : 0;
      int start = i;
      while (!stack.empty() && stack.back().second >= h) {
        const auto [s, sh] = stack.back();
        stack.pop_back();
        if (sh * (i - s) > best.pixels()) {
          best = Rect{s, j - sh + 1, i, j + 1};
        }
        start = s;
      }
      if (h > 0) stack.emplace_back(start, h);
    }
  }
  return best;
}

namespace {

void check_region(const ImageEstimate& image, const Rect& region) {
  if (region.empty()) throw std::invalid_argument("empty region");
  if (region.x0 < 0 || region.y0 < 0 || region.x1 > image.width ||
      region.y1 > image.height) {
    throw std::invalid_argument("region extends outside the image");
  }
}

}  // namespace

double local_standard_deviation(const std::vector<ImageEstimate>& images,
                                const PhaseField& field, const Rect& region) {
  if (images.empty()) throw std::invalid_argument("no images");
  double sum = 0.0, sumsq = 0.0;
  std::int64_t count = 0;
  for (const auto& image : images) {
    check_region(image, region);
    if (image.width != field.width || image.height != field.height) {
      throw std::invalid_argument("image and field dimensions differ");
    }
    for (int j = region.y0; j < region.y1; ++j) {
      for (int i = region.x0; i < region.x1; ++i) {
        const double err = image.at(i, j) - field.at(i, j);
        sum += err;
        sumsq += err * err;
        ++count;
      }
    }
  }
  const double mean = sum / count;
  return std::sqrt(std::max(0.0, sumsq / count - mean * mean));
}

double local_standard_deviation(const ImageEstimate& image,
                                const PhaseField& field, const Rect& region) {
  return local_standard_deviation(std::vector<ImageEstimate>{image}, field,
                                  region);
}

double rmse(const ImageEstimate& image, const PhaseField& field) {
  if (image.width != field.width || image.height != field.height) {
    throw std::invalid_argument("image and field dimensions differ");
  }
  double sumsq = 0.0;
  for (std::size_t k = 0; k < field.phase.size(); ++k) {
    const double err = image.phase[k] - field.phase[k];
    sumsq += err * err;
  }
  return std::sqrt(sumsq / field.phase.size());
}

int count_flagged(const ImageEstimate& image) {
  int n = 0;
  for (auto f : image.flags) {
    if (f != 0) ++n;
  }
  return n;
}

int count_singular(const ImageEstimate& image) {
  int n = 0;
  for (auto f : image.flags) {
    if (f & kFlagSingular) ++n;
  }
  return n;
}

}  // namespace fockscope
