#include "fockscope/fock_optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fockscope {

namespace detail {

double binary_outcome_fisher(double p, double dp) {
  const double variance = p * (1.0 - p);
  if (variance < kSingularTolerance) {
    throw singular_point_error(
        "binary outcome probability is pinned at 0 or 1; Fisher information "
        "is singular here");
  }
  return dp * dp / variance;
}

double legendre_pn(int n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int l = 1; l < n; ++l) {
    const double next = ((2 * l + 1) * x * cur - l * prev) / (l + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre_pn_derivative(int n, double x) {
  if (n == 0) return 0.0;
  const double denom = 1.0 - x * x;
  if (denom <= 0.0) {
    // limit values at the endpoints: P_n'(+-1) = (+-1)^{n+1} n(n+1)/2
    const double mag = 0.5 * n * (n + 1);
    const double sign = (x > 0.0 || n % 2 == 1) ? 1.0 : -1.0;
    return sign * mag;
  }
  return n * (legendre_pn(n - 1, x) - x * legendre_pn(n, x)) / denom;
}

double wigner_d_m0(int j, int m, double theta) {
  const double x = std::cos(theta);
  const double s = std::abs(std::sin(theta));
  // sectoral seed f_m^m = sqrt((2m-1)!!/(2m)!!) sin^m(theta)
  double f = 1.0;
  for (int k = 1; k <= m; ++k) {
    f *= s * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
  }
  if (j == m) return std::abs(f);
  // first step up has no l-1 term
  double fl = std::sqrt(2.0 * m + 1.0) * x * f;
  double flm1 = f;
  for (int l = m + 1; l < j; ++l) {
    const double c1 = std::sqrt((l + 1.0 - m) / (l + 1.0 + m));
    const double c2 =
        std::sqrt((l + 1.0 - m) * (l - m) * (l + m) / (l + 1.0 + m));
    const double next = ((2 * l + 1) * x * c1 * fl - c2 * flm1) / (l - m + 1);
    flm1 = fl;
    fl = next;
  }
  return std::abs(fl);
}

}  // namespace detail

InputState InputState::twin_fock(int pairs) {
  if (pairs < 1) {
    throw std::domain_error("twin-Fock state requires at least one pair");
  }
  return InputState(pairs);
}

std::string InputState::name() const {
  if (is_single_photon()) return "single";
  return "tf" + std::to_string(pairs_);
}

InputState InputState::from_name(const std::string& name) {
  if (name == "single") return single_photon();
  if (name.size() > 2 && name.compare(0, 2, "tf") == 0) {
    return twin_fock(std::stoi(name.substr(2)));
  }
  throw std::invalid_argument("unknown input state name: " + name);
}

void ImperfectionParams::validate() const {
  if (!(visibility > 0.0 && visibility <= 1.0)) {
    throw std::domain_error("visibility must lie in (0, 1]");
  }
  if (!(peak_height > 0.0 && peak_height <= 1.0)) {
    throw std::domain_error("peak height must lie in (0, 1]");
  }
}

double rotation_probability(int n1, int n2, int pairs, double theta) {
  if (pairs < 1) throw std::domain_error("need at least one photon pair");
  if (n1 < 0 || n2 < 0) throw std::domain_error("photon counts are negative");
  if (n1 + n2 != 2 * pairs) {
    throw std::domain_error("photon number not conserved: n1 + n2 != 2n");
  }
  const int m = std::abs(n1 - pairs);  // |(n1 - n2)/2|
  const double amp = detail::wigner_d_m0(pairs, m, theta);
  return std::min(amp * amp, 1.0);
}

double ideal_success_probability(const InputState& input, double theta) {
  if (input.is_single_photon()) {
    const double c = std::cos(0.5 * theta);
    return c * c;
  }
  const double pn = detail::legendre_pn(input.pairs(), std::cos(theta));
  return std::min(pn * pn, 1.0);
}

double ideal_success_derivative(const InputState& input, double theta) {
  if (input.is_single_photon()) {
    return -0.5 * std::sin(theta);
  }
  const int n = input.pairs();
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  // d/dtheta [P_n(cos)]^2 = -2 P_n P_n' sin; expand P_n' to cancel one
  // sin factor and stay finite at theta -> 0, pi.
  const double pn = detail::legendre_pn(n, x);
  if (std::abs(s) < 1e-9) {
    return -2.0 * pn * detail::legendre_pn_derivative(n, std::copysign(1.0, x)) * s;
  }
  const double num = n * (detail::legendre_pn(n - 1, x) - x * pn);
  return -2.0 * pn * num / s;
}

double apply_imperfections(double p, const ImperfectionParams& params) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("probability outside [0, 1]");
  }
  params.validate();
  return params.scale() * p + params.floor();
}

double success_probability(const ProbabilityModel& model, double theta) {
  const double p = ideal_success_probability(model.input, theta);
  if (!model.imperfections) return p;
  return apply_imperfections(p, *model.imperfections);
}

double success_derivative(const ProbabilityModel& model, double theta) {
  const double dp = ideal_success_derivative(model.input, theta);
  if (!model.imperfections) return dp;
  return model.imperfections->scale() * dp;
}

double fisher_information(const ProbabilityModel& model, double theta) {
  return detail::binary_outcome_fisher(success_probability(model, theta),
                                       success_derivative(model, theta));
}

namespace {

// Signed rotation amplitude whose zeros are the dark fringes of the ideal
// success probability (the probability itself is its square and touches
// zero without a sign change).
double success_amplitude(const InputState& input, double theta) {
  if (input.is_single_photon()) return std::cos(0.5 * theta);
  return detail::legendre_pn(input.pairs(), std::cos(theta));
}

}  // namespace

double dark_fringe(const InputState& input) {
  constexpr double kGridStep = 1e-3;
  constexpr double kTolerance = 1e-12;
  const int steps = static_cast<int>(std::numbers::pi / kGridStep) + 2;
  double lo = kGridStep;
  double flo = success_amplitude(input, lo);
  for (int k = 2; k <= steps; ++k) {
    const double hi = k * kGridStep;
    const double fhi = success_amplitude(input, hi);
    if (flo == 0.0) return lo;
    if ((flo > 0.0) != (fhi > 0.0) || fhi == 0.0) {
      // bisect the bracketed sign change
      double a = lo, b = hi, fa = flo;
      while (b - a > kTolerance) {
        const double mid = 0.5 * (a + b);
        const double fmid = success_amplitude(input, mid);
        if (fmid == 0.0) return mid;
        if ((fa > 0.0) != (fmid > 0.0)) {
          b = mid;
        } else {
          a = mid;
          fa = fmid;
        }
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    flo = fhi;
  }
  throw std::runtime_error("no dark fringe found in (0, pi]");
}

double quantum_crb(int total_photons) {
  if (total_photons < 1) throw std::domain_error("need at least one photon");
  const double n = total_photons;
  return 1.0 / std::sqrt(0.5 * n * (n + 2.0));
}

double shot_noise_limit(int total_photons) {
  if (total_photons < 1) throw std::domain_error("need at least one photon");
  return 1.0 / std::sqrt(static_cast<double>(total_photons));
}

}  // namespace fockscope
