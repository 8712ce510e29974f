#include "fockscope/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fockscope {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t RandomStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RandomStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RandomStream RandomSource::stream(std::uint64_t stream_id) const {
  // scatter (seed, id) pairs over the full state space so windows of
  // different streams cannot overlap in practice
  return RandomStream(mix64(seed_ + kGolden * (stream_id + 1)));
}

RandomSource RandomSource::fork(std::uint64_t salt) const {
  return RandomSource(mix64(mix64(seed_) ^ (salt + kGolden)));
}

MeasurementRecord simulate_counts(double p, std::int64_t trials,
                                  RandomStream& stream) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("success probability outside [0, 1]");
  }
  if (trials < 1) throw std::domain_error("need at least one trial");
  std::int64_t successes = 0;
  for (std::int64_t k = 0; k < trials; ++k) {
    if (stream.next_uniform() < p) ++successes;
  }
  return MeasurementRecord{trials, successes};
}

CalibrationCurve::CalibrationCurve(InputState input, double scale,
                                   double offset)
    : input_(input),
      scale_(scale),
      offset_(offset),
      theta_dark_(dark_fringe(input)) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("calibration scale must be positive");
  }
}

CalibrationCurve CalibrationCurve::ideal(InputState input) {
  return CalibrationCurve(input, 1.0, 0.0);
}

double CalibrationCurve::value(double theta) const {
  const double p = scale_ * ideal_success_probability(input_, theta) + offset_;
  return std::clamp(p, 0.0, 1.0);
}

double CalibrationCurve::derivative(double theta) const {
  return scale_ * ideal_success_derivative(input_, theta);
}

double fisher_information(const CalibrationCurve& curve, double theta) {
  const double p =
      curve.scale() * ideal_success_probability(curve.input(), theta) +
      curve.offset();
  return detail::binary_outcome_fisher(p, curve.derivative(theta));
}

std::vector<double> default_calibration_grid() {
  constexpr int kPoints = 201;
  std::vector<double> grid(kPoints);
  for (int k = 0; k < kPoints; ++k) {
    grid[k] = -std::numbers::pi +
              2.0 * std::numbers::pi * k / (kPoints - 1);
  }
  return grid;
}

CalibrationFit calibrate(const ProbabilityModel& model,
                         const std::vector<double>& theta_grid,
                         std::int64_t shots, std::int64_t reps,
                         const RandomSource& source) {
  if (theta_grid.size() < 3) {
    throw std::invalid_argument("calibration grid needs at least 3 points");
  }
  if (shots < 1 || reps < 1) {
    throw std::invalid_argument("calibration needs shots >= 1 and reps >= 1");
  }

  const std::size_t npts = theta_grid.size();
  std::vector<CalibrationPoint> points(npts);
  std::vector<double> ideal(npts);
  for (std::size_t k = 0; k < npts; ++k) {
    const double theta = theta_grid[k];
    const double p = success_probability(model, theta);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t r = 0; r < reps; ++r) {
      RandomStream stream = source.stream(k * static_cast<std::uint64_t>(reps) + r);
      const double rate = simulate_counts(p, shots, stream).rate();
      sum += rate;
      sumsq += rate * rate;
    }
    const double mean = sum / reps;
    const double var =
        reps > 1 ? std::max(0.0, (sumsq - reps * mean * mean) / (reps - 1))
                 : 0.0;
    points[k] = CalibrationPoint{theta, mean, std::sqrt(var)};
    ideal[k] = ideal_success_probability(model.input, theta);
  }

  // ordinary least squares of mean rate against the ideal curve
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < npts; ++k) {
    sx += ideal[k];
    sy += points[k].mean_rate;
    sxx += ideal[k] * ideal[k];
    sxy += ideal[k] * points[k].mean_rate;
  }
  const double n = static_cast<double>(npts);
  const double var_x = sxx - sx * sx / n;
  if (var_x < 1e-12) {
    throw std::invalid_argument(
        "degenerate calibration design: grid does not span a fringe");
  }
  const double a = (sxy - sx * sy / n) / var_x;
  const double b = (sy - a * sx) / n;

  CalibrationCurve curve(model.input, a, b);
  double ss = 0.0;
  for (std::size_t k = 0; k < npts; ++k) {
    const double r = points[k].mean_rate - (a * ideal[k] + b);
    ss += r * r;
  }
  curve.residual_rms = std::sqrt(ss / n);
  curve.fit_points = static_cast<int>(npts);
  return CalibrationFit{curve, std::move(points)};
}

}  // namespace fockscope
