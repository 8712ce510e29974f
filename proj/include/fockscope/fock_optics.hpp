#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fockscope {

/// Thrown when a probability curve carries no usable Fisher information at
/// the requested phase (outcome probability pinned at 0 or 1, or vanishing
/// slope making the sensitivity diverge).
class singular_point_error : public std::domain_error {
  using std::domain_error::domain_error;
};

/// Probe state illuminating the interferometer: either a twin-Fock state
/// with n photon pairs (total N = 2n) or the single-photon state.
class InputState {
 public:
  static InputState single_photon() { return InputState(0); }
  static InputState twin_fock(int pairs);

  bool is_twin_fock() const { return pairs_ > 0; }
  bool is_single_photon() const { return pairs_ == 0; }

  /// Photon pairs n (twin-Fock); 0 for the single-photon state.
  int pairs() const { return pairs_; }
  /// Total photon number N = 2n, or 1 for the single-photon state.
  int total_photons() const { return pairs_ > 0 ? 2 * pairs_ : 1; }

  /// Short identifier: "single", "tf1", "tf2", ...
  std::string name() const;
  static InputState from_name(const std::string& name);

  friend bool operator==(const InputState& a, const InputState& b) {
    return a.pairs_ == b.pairs_;
  }

 private:
  explicit InputState(int pairs) : pairs_(pairs) {}
  int pairs_;
};

/// Phenomenological detection imperfections: visibility V and peak height h,
/// both in (0, 1]. V = h = 1 is the identity mapping.
struct ImperfectionParams {
  double visibility = 1.0;
  double peak_height = 1.0;

  /// Slope of the affine probability map, 2hV/(1+V).
  double scale() const {
    return 2.0 * peak_height * visibility / (1.0 + visibility);
  }
  /// Intercept of the affine probability map, h(1-V)/(1+V).
  double floor() const {
    return peak_height * (1.0 - visibility) / (1.0 + visibility);
  }

  void validate() const;
};

/// Success-probability model for the binary outcome "+": the ideal rotation
/// probability of the input state, optionally composed with an imperfection
/// map. Immutable and safe to share across threads.
struct ProbabilityModel {
  InputState input;
  std::optional<ImperfectionParams> imperfections;

  explicit ProbabilityModel(InputState state,
                            std::optional<ImperfectionParams> params = {})
      : input(state), imperfections(params) {
    if (imperfections) imperfections->validate();
  }
};

/// |<n1,n2| exp(-i theta Jy) |n,n>|^2 for a twin-Fock input with n pairs.
/// Computed through a numerically stable normalized-Legendre recursion in
/// the angular-momentum representation (j = n, m' = (n1-n2)/2); valid far
/// beyond the n ~ 15 limit of factorial formulas.
/// Throws std::domain_error unless n >= 1, n1, n2 >= 0 and n1 + n2 = 2n.
double rotation_probability(int n1, int n2, int pairs, double theta);

/// Ideal probability of the "+" outcome (n1 = n2 = n for twin-Fock,
/// n1 = 1, n2 = 0 for the single photon) after a Jy rotation by theta.
double ideal_success_probability(const InputState& input, double theta);

/// d/dtheta of ideal_success_probability, in closed form.
double ideal_success_derivative(const InputState& input, double theta);

/// Affine imperfection map p -> 2hV/(1+V) p + h(1-V)/(1+V); maps [0,1]
/// into [h(1-V)/(1+V), h]. Throws std::domain_error if p is outside [0,1].
double apply_imperfections(double p, const ImperfectionParams& params);

/// P(+|theta) of the model: ideal curve composed with the imperfection map
/// when imperfections are present.
double success_probability(const ProbabilityModel& model, double theta);

/// d/dtheta of success_probability.
double success_derivative(const ProbabilityModel& model, double theta);

/// Classical Fisher information of the binary outcome at theta,
/// F = (dP/dtheta)^2 / [P(1-P)], with the analytic derivative.
/// Throws singular_point_error when P(1-P) < 1e-12.
double fisher_information(const ProbabilityModel& model, double theta);

/// Smallest theta > 0 where the ideal success probability vanishes
/// (pi for the single photon), located to 1e-12.
double dark_fringe(const InputState& input);

/// Quantum Cramer-Rao bound 1/sqrt(N(N+2)/2) for N photons per measurement;
/// approaches sqrt(2)/N for large N.
double quantum_crb(int total_photons);

/// Shot-noise limit 1/sqrt(N).
double shot_noise_limit(int total_photons);

namespace detail {

/// Tolerance below which P(1-P) is treated as a singular point.
inline constexpr double kSingularTolerance = 1e-12;

/// F = dp^2 / [p(1-p)] with the singular-point guard.
double binary_outcome_fisher(double p, double dp);

/// Legendre polynomial P_n(x) by the Bonnet recurrence.
double legendre_pn(int n, double x);

/// d/dx P_n(x); finite for |x| < 1.
double legendre_pn_derivative(int n, double x);

/// Wigner d-matrix element magnitude |d^j_{m,0}(theta)| for integer j >= m >= 0,
/// i.e. sqrt((j-m)!/(j+m)!) |P_j^m(cos theta)|, via the normalized
/// associated-Legendre forward recursion.
double wigner_d_m0(int j, int m, double theta);

}  // namespace detail

}  // namespace fockscope
