#pragma once

#include <cstdint>
#include <vector>

#include "fockscope/fock_optics.hpp"

namespace fockscope {

/// Deterministic uniform generator (splitmix64). One instance per pixel or
/// measurement sequence; instances created from distinct stream ids are
/// statistically independent, so parallel consumers stay reproducible.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64();
  /// Uniform double in [0, 1) with 53 random bits.
  double next_uniform();

 private:
  std::uint64_t state_;
};

/// Seeded root of all randomness in a run. Identical seeds yield
/// bit-identical streams; stream(id) and fork(salt) derive independent
/// sub-generators so per-pixel work can be scheduled in any order.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  RandomStream stream(std::uint64_t stream_id) const;
  RandomSource fork(std::uint64_t salt) const;

 private:
  std::uint64_t seed_;
};

/// Counts from one sequence of binary-outcome measurements.
struct MeasurementRecord {
  std::int64_t trials = 0;
  std::int64_t successes = 0;

  double rate() const { return static_cast<double>(successes) / trials; }
};

/// Draw `trials` uniform deviates and count those below p.
/// Throws std::domain_error if p is outside [0, 1] or trials < 1.
MeasurementRecord simulate_counts(double p, std::int64_t trials,
                                  RandomStream& stream);

/// Fitted signal P_fit(+|theta) = a * P_ideal(theta) + b for one input
/// state, together with the location of the underlying first dark fringe.
/// Immutable once constructed.
class CalibrationCurve {
 public:
  /// Curve with known coefficients (e.g. analytic imperfection values).
  CalibrationCurve(InputState input, double scale, double offset);

  /// The loss-free curve: a = 1, b = 0.
  static CalibrationCurve ideal(InputState input);

  const InputState& input() const { return input_; }
  double scale() const { return scale_; }
  double offset() const { return offset_; }
  double theta_dark() const { return theta_dark_; }

  /// P_fit(theta), clamped into [0, 1].
  double value(double theta) const;
  /// Slope of the (unclamped) fitted signal.
  double derivative(double theta) const;

  /// Fit diagnostics; zero for curves built from known coefficients.
  double residual_rms = 0.0;
  int fit_points = 0;

 private:
  InputState input_;
  double scale_;
  double offset_;
  double theta_dark_;
};

/// Convenience alias matching the way the curve is consumed downstream.
inline double p_fit(const CalibrationCurve& curve, double theta) {
  return curve.value(theta);
}

/// Fisher information of the fitted signal at theta.
/// Throws singular_point_error when P_fit(1 - P_fit) < 1e-12.
double fisher_information(const CalibrationCurve& curve, double theta);

/// One calibration grid point: averaged count rate and its spread over the
/// repetitions.
struct CalibrationPoint {
  double theta = 0.0;
  double mean_rate = 0.0;
  double std_rate = 0.0;
};

struct CalibrationFit {
  CalibrationCurve curve;
  std::vector<CalibrationPoint> points;
};

/// 201 uniform angles spanning [-pi, pi].
std::vector<double> default_calibration_grid();

/// Simulate `reps` sequences of `shots` measurements at every grid angle
/// and least-squares fit the averaged rate to a * P_ideal(theta) + b.
/// Throws std::invalid_argument for fewer than 3 grid points or a
/// degenerate design (grid not spanning a fringe).
CalibrationFit calibrate(const ProbabilityModel& model,
                         const std::vector<double>& theta_grid,
                         std::int64_t shots, std::int64_t reps,
                         const RandomSource& source);

}  // namespace fockscope
