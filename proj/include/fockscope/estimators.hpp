#pragma once

#include <cstdint>
#include <optional>

#include "fockscope/sampling.hpp"

namespace fockscope {

/// Monotone window of the fitted signal in which the phase is known to lie
/// a priori; (0, theta_dark) unless the caller narrows it.
struct PriorInterval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
};

enum class EstimateMethod { inversion, mle, combined_mle };

struct PhaseEstimate {
  double value = 0.0;
  /// Gaussian confidence width; absent for raw inversion and for
  /// degenerate posteriors.
  std::optional<double> sigma;
  EstimateMethod method = EstimateMethod::inversion;
  /// Inversion only: the measured rate fell outside the curve's range on
  /// the interval and the estimate was clamped to the nearer endpoint.
  bool clamped = false;
  /// MLE only: the posterior was flat within tolerance.
  bool degenerate = false;
};

/// Counts from the two-sequence scheme: one sequence without an offset
/// phase and one with the fixed offset applied.
struct TwoSequenceRecord {
  MeasurementRecord base;      // sensed phase = phi
  MeasurementRecord offsetted; // sensed phase = phi + offset
  double offset = 0.0;
};

/// Number of likelihood evaluations across the prior interval.
inline constexpr int kLikelihoodGridPoints = 2000;

/// Solve P_fit(theta) = rate on the interval by bisection (1e-9 rad).
/// Rates outside the curve's range clamp to the nearer endpoint and set
/// the clamped flag. Throws std::invalid_argument if the curve is not
/// monotone on the interval.
PhaseEstimate invert_signal(const CalibrationCurve& curve, double rate,
                            const PriorInterval& interval);

/// Maximum-likelihood phase from one binomial record, with the Gaussian
/// confidence width sigma taken from the curvature of the log-posterior at
/// the peak (68.3% mass integration as fallback).
PhaseEstimate mle_single(const CalibrationCurve& curve,
                         const MeasurementRecord& record,
                         const PriorInterval& prior);

/// Maximum-likelihood phase from the product likelihood of both sequences;
/// reduces to mle_single when either sequence is empty.
PhaseEstimate mle_combined(const CalibrationCurve& curve,
                           const TwoSequenceRecord& data,
                           const PriorInterval& prior);

/// Phase uncertainty 1/sqrt(shots * F(theta)) of the fitted curve.
/// Throws singular_point_error where the information vanishes.
double sensitivity(const CalibrationCurve& curve, double theta,
                   std::int64_t shots);

/// Total Fisher information of the two-sequence scheme,
/// n1 F(phi) + n2 F(phi + offset); a singular evaluation point contributes
/// its limit 0. Throws singular_point_error only when every contributing
/// term is singular.
double total_fisher(const CalibrationCurve& curve, double phi, double offset,
                    std::int64_t n1, std::int64_t n2);

/// Phase minimizing 1/sqrt(F) on [1e-3, theta_dark - 1e-3]; ties break
/// toward smaller theta (a flat ideal curve returns the left margin).
double optimal_working_point(const CalibrationCurve& curve);

}  // namespace fockscope
