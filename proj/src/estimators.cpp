#include "fockscope/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace fockscope {

namespace {

constexpr double kInversionTolerance = 1e-9;
constexpr double kProbabilityClamp = 1e-12;
constexpr double kDegenerateLogRange = 1e-9;
constexpr double kWorkingPointMargin = 1e-3;

void validate_interval(const CalibrationCurve& curve,
                       const PriorInterval& interval) {
  if (!(interval.lower >= 0.0) || !(interval.lower < interval.upper)) {
    throw std::invalid_argument("prior interval must satisfy 0 <= lower < upper");
  }
  if (interval.upper > curve.theta_dark() + 1e-9) {
    throw std::invalid_argument(
        "prior interval extends past the curve's first dark fringe");
  }
}

void require_monotone(const CalibrationCurve& curve,
                      const PriorInterval& interval) {
  constexpr int kSamples = 129;
  int positive = 0, negative = 0;
  for (int k = 1; k < kSamples; ++k) {
    const double theta =
        interval.lower + interval.width() * k / kSamples;
    const double d = curve.derivative(theta);
    if (d > 0.0) ++positive;
    if (d < 0.0) ++negative;
  }
  if (positive > 0 && negative > 0) {
    throw std::invalid_argument("signal is not monotone on the interval");
  }
}

double clamped_log(double p) {
  return std::log(std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp));
}

double binomial_loglik(const CalibrationCurve& curve,
                       const MeasurementRecord& record, double theta) {
  const double p = curve.value(theta);
  return record.successes * clamped_log(p) +
         (record.trials - record.successes) * clamped_log(1.0 - p);
}

// Golden-section maximization of a unimodal function on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct GridMax {
  std::vector<double> theta;
  std::vector<double> loglik;
  int argmax = 0;
  bool degenerate = false;
};

GridMax scan_loglik(const std::function<double(double)>& loglik,
                    const PriorInterval& prior) {
  GridMax g;
  g.theta.resize(kLikelihoodGridPoints);
  g.loglik.resize(kLikelihoodGridPoints);
  double best = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kLikelihoodGridPoints; ++k) {
    const double theta =
        prior.lower + prior.width() * k / (kLikelihoodGridPoints - 1);
    const double l = loglik(theta);
    g.theta[k] = theta;
    g.loglik[k] = l;
    if (l > best) {
      best = l;
      g.argmax = k;
    }
    worst = std::min(worst, l);
  }
  g.degenerate = (best - worst) < kDegenerateLogRange;
  return g;
}

// 68.3% credible half-width of the normalized grid posterior around the peak.
double sigma_by_integration(const GridMax& g, double peak) {
  const double step = g.theta[1] - g.theta[0];
  const double lmax = g.loglik[g.argmax];
  const int n = static_cast<int>(g.loglik.size());
  double total = 0.0;
  std::vector<double> w(g.loglik.size());
  for (int k = 0; k < n; ++k) {
    w[k] = std::exp(g.loglik[k] - lmax);
    total += w[k];
  }
  // grow the symmetric window bin by bin until it holds 68.3% of the mass
  int lo = static_cast<int>(std::round((peak - g.theta.front()) / step));
  lo = std::clamp(lo, 0, n - 1);
  int hi = lo;
  double covered = w[lo];
  double radius = 0.5 * step;
  while (covered < 0.683 * total && (lo > 0 || hi < n - 1)) {
    radius += step;
    if (lo > 0) covered += w[--lo];
    if (hi < n - 1) covered += w[++hi];
  }
  return std::max(radius, 1e-12);
}

PhaseEstimate maximize_posterior(const std::function<double(double)>& loglik,
                                 const PriorInterval& prior,
                                 EstimateMethod method) {
  const GridMax g = scan_loglik(loglik, prior);
  PhaseEstimate est;
  est.method = method;
  if (g.degenerate) {
    est.value = g.theta[g.argmax];
    est.degenerate = true;
    return est;
  }

  double peak = g.theta[g.argmax];
  if (g.argmax > 0 && g.argmax + 1 < kLikelihoodGridPoints) {
    peak = golden_max(loglik, g.theta[g.argmax - 1], g.theta[g.argmax + 1]);
  }
  est.value = peak;

  // Gaussian width from the curvature of the log-posterior at the peak;
  // near the prior boundary or with non-concave curvature fall back to the
  // direct 68.3% interval of the grid posterior.
  const double grid_step = g.theta[1] - g.theta[0];
  double sigma = 0.0;
  double h = grid_step;
  for (int pass = 0; pass < 2; ++pass) {
    if (peak - h < prior.lower || peak + h > prior.upper) {
      sigma = 0.0;
      break;
    }
    const double curv =
        (loglik(peak + h) + loglik(peak - h) - 2.0 * loglik(peak)) / (h * h);
    if (curv >= 0.0) {
      sigma = 0.0;
      break;
    }
    sigma = 1.0 / std::sqrt(-curv);
    const double refined = std::clamp(sigma / 5.0, 1e-7, grid_step);
    if (std::abs(refined - h) < 0.1 * h) break;
    h = refined;
  }
  est.sigma = sigma > 0.0 ? sigma : sigma_by_integration(g, peak);
  return est;
}

}  // namespace

PhaseEstimate invert_signal(const CalibrationCurve& curve, double rate,
                            const PriorInterval& interval) {
  validate_interval(curve, interval);
  require_monotone(curve, interval);

  double lo = interval.lower, hi = interval.upper;
  double flo = curve.value(lo) - rate;
  double fhi = curve.value(hi) - rate;

  PhaseEstimate est;
  est.method = EstimateMethod::inversion;
  if (flo == 0.0) {
    est.value = lo;
    return est;
  }
  if (fhi == 0.0) {
    est.value = hi;
    return est;
  }
  if ((flo > 0.0) == (fhi > 0.0)) {
    // rate outside the curve's range: clamp to the endpoint whose value is
    // nearest (finite-sample rates legitimately overshoot the fit)
    est.value = std::abs(flo) <= std::abs(fhi) ? lo : hi;
    est.clamped = true;
    return est;
  }
  while (hi - lo > kInversionTolerance) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = curve.value(mid) - rate;
    if (fmid == 0.0) {
      est.value = mid;
      return est;
    }
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  est.value = 0.5 * (lo + hi);
  return est;
}

PhaseEstimate mle_single(const CalibrationCurve& curve,
                         const MeasurementRecord& record,
                         const PriorInterval& prior) {
  validate_interval(curve, prior);
  if (record.trials < 1 || record.successes < 0 ||
      record.successes > record.trials) {
    throw std::domain_error("invalid measurement record");
  }
  return maximize_posterior(
      [&](double theta) { return binomial_loglik(curve, record, theta); },
      prior, EstimateMethod::mle);
}

PhaseEstimate mle_combined(const CalibrationCurve& curve,
                           const TwoSequenceRecord& data,
                           const PriorInterval& prior) {
  validate_interval(curve, prior);
  const bool have_base = data.base.trials > 0;
  const bool have_offsetted = data.offsetted.trials > 0;
  if (!have_base && !have_offsetted) {
    throw std::domain_error("both sequences are empty");
  }
  auto loglik = [&](double phi) {
    double l = 0.0;
    if (have_base) l += binomial_loglik(curve, data.base, phi);
    if (have_offsetted) {
      l += binomial_loglik(curve, data.offsetted, phi + data.offset);
    }
    return l;
  };
  return maximize_posterior(loglik, prior, EstimateMethod::combined_mle);
}

double sensitivity(const CalibrationCurve& curve, double theta,
                   std::int64_t shots) {
  if (shots < 1) throw std::domain_error("need at least one measurement");
  const double info = fisher_information(curve, theta);
  if (info < detail::kSingularTolerance) {
    throw singular_point_error("signal slope vanishes; sensitivity diverges");
  }
  return 1.0 / std::sqrt(static_cast<double>(shots) * info);
}

double total_fisher(const CalibrationCurve& curve, double phi, double offset,
                    std::int64_t n1, std::int64_t n2) {
  if (n1 < 0 || n2 < 0) throw std::domain_error("negative sequence length");
  if (n1 == 0 && n2 == 0) {
    throw std::domain_error("both sequences are empty");
  }
  double total = 0.0;
  int contributing = 0, singular = 0;
  auto add_term = [&](double angle, std::int64_t count) {
    if (count == 0) return;
    ++contributing;
    try {
      total += count * fisher_information(curve, angle);
    } catch (const singular_point_error&) {
      ++singular;  // the information limit at a pinned probability is 0
    }
  };
  add_term(phi, n1);
  add_term(phi + offset, n2);
  if (singular == contributing) {
    throw singular_point_error(
        "every evaluation point of the two-sequence scheme is singular");
  }
  return total;
}

double optimal_working_point(const CalibrationCurve& curve) {
  const double lo = kWorkingPointMargin;
  const double hi = curve.theta_dark() - kWorkingPointMargin;
  if (!(lo < hi)) {
    throw std::invalid_argument("dark fringe too close to zero");
  }
  constexpr int kScanPoints = 4000;
  auto info_at = [&](double theta) {
    try {
      return fisher_information(curve, theta);
    } catch (const singular_point_error&) {
      return -1.0;
    }
  };

  int best = -1;
  double best_info = -1.0;
  std::vector<double> thetas(kScanPoints);
  std::vector<double> infos(kScanPoints);
  for (int k = 0; k < kScanPoints; ++k) {
    thetas[k] = lo + (hi - lo) * k / (kScanPoints - 1);
    infos[k] = info_at(thetas[k]);
    // improvements below the round-off of p(1-p) near the endpoints are
    // plateau noise; requiring a real gain resolves ties to smaller theta
    if (infos[k] > best_info + 1e-8 * std::max(std::abs(best_info), 1.0)) {
      best_info = infos[k];
      best = k;
    }
  }
  if (best < 0 || best_info <= 0.0) {
    throw singular_point_error("no finite working point on the curve");
  }
  if (best == 0 || best == kScanPoints - 1) return thetas[best];
  const double rel = std::abs(best_info) * 1e-8;
  if (infos[best] - infos[best - 1] <= rel &&
      infos[best] - infos[best + 1] <= rel) {
    return thetas[best];  // flat plateau, keep the tie-broken grid point
  }
  return golden_max(info_at, thetas[best - 1], thetas[best + 1]);
}

}  // namespace fockscope
