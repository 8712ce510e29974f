#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fockscope/fock_optics.hpp"

using namespace fockscope;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent Legendre oracle (plain Bonnet recurrence, no shared code path
// with the rotation-amplitude recursion under test).
double oracle_legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return p0;
  for (int l = 1; l < n; ++l) {
    const double p2 = ((2.0 * l + 1.0) * x * p1 - l * p0) / (l + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Closed forms of the low-order twin-Fock "+" outcome probabilities.
double closed_form_success(int n, double theta) {
  switch (n) {
    case 1: {
      const double c = std::cos(theta);
      return c * c;
    }
    case 2: {
      const double v = (1.0 + 3.0 * std::cos(2.0 * theta)) / 4.0;
      return v * v;
    }
    case 3: {
      const double v =
          (3.0 * std::cos(theta) + 5.0 * std::cos(3.0 * theta)) / 8.0;
      return v * v;
    }
    default:
      REQUIRE(false);
      return 0.0;
  }
}

// Central-difference Fisher information, the declared 1e-5 step; used as
// the independent oracle for the analytic derivative path.
double fd_fisher(const ProbabilityModel& model, double theta) {
  const double h = 1e-5;
  const double dp = (success_probability(model, theta + h) -
                     success_probability(model, theta - h)) /
                    (2.0 * h);
  const double p = success_probability(model, theta);
  return dp * dp / (p * (1.0 - p));
}

}  // namespace

TEST_CASE("rotation probability matches the closed forms") {
  CHECK(rotation_probability(1, 1, 1, 0.0) == doctest::Approx(1.0));
  CHECK(rotation_probability(1, 1, 1, kPi / 4) == doctest::Approx(0.5));
  CHECK(rotation_probability(2, 2, 2, kPi / 4) == doctest::Approx(0.0625));
  CHECK(rotation_probability(3, 3, 3, std::atan(std::sqrt(2.0 / 3.0))) ==
        doctest::Approx(0.0).epsilon(1e-12));

  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k < 1000; ++k) {
      const double theta = -kPi + 2.0 * kPi * k / 999.0;
      CHECK(std::abs(rotation_probability(n, n, n, theta) -
                     closed_form_success(n, theta)) < 1e-10);
    }
  }
}

TEST_CASE("rotation probability rejects invalid counts") {
  CHECK_THROWS_AS(rotation_probability(1, 2, 1, 0.1), std::domain_error);
  CHECK_THROWS_AS(rotation_probability(-1, 3, 1, 0.1), std::domain_error);
  CHECK_THROWS_AS(rotation_probability(0, 0, 0, 0.1), std::domain_error);
}

TEST_CASE("diagonal element equals the squared Legendre polynomial") {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 0; k < 200; ++k) {
      const double theta = -kPi + 2.0 * kPi * (k + 0.5) / 200.0;
      const double pn = oracle_legendre(n, std::cos(theta));
      CHECK(std::abs(rotation_probability(n, n, n, theta) - pn * pn) < 1e-10);
    }
  }
}

TEST_CASE("outcome probabilities are complete") {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 0; k < 100; ++k) {
      const double theta = -kPi + 2.0 * kPi * (k + 0.5) / 100.0;
      double sum = 0.0;
      for (int n1 = 0; n1 <= 2 * n; ++n1) {
        sum += rotation_probability(n1, 2 * n - n1, n, theta);
      }
      CHECK(std::abs(sum - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("the recursion stays normalized far beyond the factorial limit") {
  // factorial formulas overflow near n = 15; the recursion does not
  for (int n : {20, 40}) {
    for (int k = 0; k < 20; ++k) {
      const double theta = -kPi + 2.0 * kPi * (k + 0.5) / 20.0;
      double sum = 0.0;
      for (int n1 = 0; n1 <= 2 * n; ++n1) {
        const double p = rotation_probability(n1, 2 * n - n1, n, theta);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        sum += p;
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("success probability is even in theta") {
  const std::vector<InputState> states = {
      InputState::single_photon(), InputState::twin_fock(1),
      InputState::twin_fock(3), InputState::twin_fock(7)};
  for (const auto& state : states) {
    for (int k = 1; k < 50; ++k) {
      const double theta = 3.0 * k / 50.0;
      CHECK(ideal_success_probability(state, theta) ==
            ideal_success_probability(state, -theta));
    }
  }
}

TEST_CASE("success probability special values") {
  const ProbabilityModel single(InputState::single_photon());
  CHECK(success_probability(single, kPi) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(success_probability(single, kPi / 2) == doctest::Approx(0.5));

  const ProbabilityModel tf3(InputState::twin_fock(3));
  CHECK(success_probability(tf3, 0.0) == doctest::Approx(1.0));

  const ProbabilityModel lossy(InputState::twin_fock(1),
                               ImperfectionParams{1.0, 0.5});
  CHECK(success_probability(lossy, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("imperfection map endpoints and bounds") {
  const ImperfectionParams params{0.994, 0.99};
  CHECK(apply_imperfections(1.0, params) == doctest::Approx(0.99));
  CHECK(apply_imperfections(0.0, params) ==
        doctest::Approx(0.99 * 0.006 / 1.994).epsilon(1e-12));
  CHECK(apply_imperfections(0.0, params) == doctest::Approx(0.0029789368));

  const ImperfectionParams identity{1.0, 1.0};
  CHECK(apply_imperfections(0.3, identity) == doctest::Approx(0.3));

  CHECK_THROWS_AS(apply_imperfections(1.2, params), std::domain_error);
  CHECK_THROWS_AS(apply_imperfections(-0.1, params), std::domain_error);

  // affine, monotone, image inside [floor, h]
  double prev = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double p = k / 100.0;
    const double mapped = apply_imperfections(p, params);
    CHECK(mapped >= params.floor() - 1e-15);
    CHECK(mapped <= params.peak_height + 1e-15);
    CHECK(mapped > prev);
    prev = mapped;
  }
}

TEST_CASE("imperfection parameters are validated") {
  CHECK_THROWS_AS((ImperfectionParams{0.0, 0.5}.validate()), std::domain_error);
  CHECK_THROWS_AS((ImperfectionParams{0.5, 1.5}.validate()), std::domain_error);
  CHECK_NOTHROW((ImperfectionParams{1.0, 1.0}.validate()));
}

TEST_CASE("Fisher information of the ideal curves") {
  const ProbabilityModel single(InputState::single_photon());
  for (int k = 0; k <= 50; ++k) {
    const double theta = 0.1 + 2.9 * k / 50.0;
    CHECK(std::abs(fisher_information(single, theta) - 1.0) < 1e-8);
  }

  const ProbabilityModel tf1(InputState::twin_fock(1));
  CHECK(fisher_information(tf1, kPi / 4) == doctest::Approx(4.0));
  CHECK(fisher_information(tf1, 0.7) == doctest::Approx(4.0));

  // F -> N(N+2)/2 as theta -> 0 for the twin-Fock states
  for (int n : {1, 2, 3}) {
    const ProbabilityModel model(InputState::twin_fock(n));
    const double limit = 2.0 * n * (n + 1.0);
    CHECK(std::abs(fisher_information(model, 1e-3) - limit) < 1e-3 * limit);
  }
  CHECK(fisher_information(ProbabilityModel(InputState::twin_fock(2)), 1e-3) ==
        doctest::Approx(12.0).epsilon(1e-3));
}

TEST_CASE("analytic Fisher information agrees with the finite-difference oracle") {
  const std::vector<ProbabilityModel> models = {
      ProbabilityModel(InputState::single_photon(),
                       ImperfectionParams{0.994, 0.99}),
      ProbabilityModel(InputState::twin_fock(1), ImperfectionParams{0.983, 0.985}),
      ProbabilityModel(InputState::twin_fock(2), ImperfectionParams{0.97, 0.98}),
      ProbabilityModel(InputState::twin_fock(3), ImperfectionParams{0.94, 0.975}),
      ProbabilityModel(InputState::twin_fock(5))};
  for (const auto& model : models) {
    const double dark = dark_fringe(model.input);
    for (int k = 1; k < 12; ++k) {
      const double theta = dark * k / 12.0;
      const double analytic = fisher_information(model, theta);
      const double numeric = fd_fisher(model, theta);
      CHECK(std::abs(analytic - numeric) < 1e-6 * std::max(1.0, analytic));
    }
  }
}

TEST_CASE("Fisher information is singular where the outcome is pinned") {
  const ProbabilityModel ideal_tf1(InputState::twin_fock(1));
  CHECK_THROWS_AS(fisher_information(ideal_tf1, 0.0), singular_point_error);
  CHECK_THROWS_AS(fisher_information(ideal_tf1, kPi / 2), singular_point_error);
}

TEST_CASE("with imperfections the dark-fringe information collapses") {
  const std::vector<std::pair<int, ImperfectionParams>> cases = {
      {1, {0.983, 0.985}}, {2, {0.97, 0.98}}, {3, {0.94, 0.975}}};
  for (const auto& [n, params] : cases) {
    const ProbabilityModel model(InputState::twin_fock(n), params);
    const double dark = dark_fringe(model.input);
    const double at_dark = fisher_information(model, dark);
    double best = 0.0;
    for (int k = 1; k < 400; ++k) {
      best = std::max(best, fisher_information(model, dark * k / 400.0));
    }
    CHECK(at_dark < 1e-3 * best);
  }
}

TEST_CASE("first dark fringes") {
  CHECK(std::abs(dark_fringe(InputState::twin_fock(1)) - kPi / 2) < 1e-9);
  CHECK(std::abs(dark_fringe(InputState::twin_fock(2)) -
                 std::acos(std::sqrt(1.0 / 3.0))) < 1e-9);
  CHECK(std::abs(dark_fringe(InputState::twin_fock(3)) -
                 std::atan(std::sqrt(2.0 / 3.0))) < 1e-9);
  CHECK(std::abs(dark_fringe(InputState::single_photon()) - kPi) < 1e-9);
  CHECK(dark_fringe(InputState::twin_fock(2)) ==
        doctest::Approx(0.9553166181245093).epsilon(1e-12));
  CHECK(dark_fringe(InputState::twin_fock(3)) ==
        doctest::Approx(0.6847192030022829).epsilon(1e-12));
}

TEST_CASE("metrology bounds") {
  CHECK(quantum_crb(2) == doctest::Approx(0.5));
  CHECK(quantum_crb(6) == doctest::Approx(1.0 / std::sqrt(24.0)));
  CHECK(quantum_crb(6) == doctest::Approx(0.2041241452));
  CHECK(quantum_crb(1) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(quantum_crb(1) == doctest::Approx(0.8164965809));

  CHECK(shot_noise_limit(4) == doctest::Approx(0.5));
  CHECK(shot_noise_limit(1) == doctest::Approx(1.0));
  CHECK(shot_noise_limit(6) == doctest::Approx(0.4082482905));
}

TEST_CASE("input state names round-trip") {
  CHECK(InputState::single_photon().name() == "single");
  CHECK(InputState::twin_fock(3).name() == "tf3");
  CHECK(InputState::from_name("tf2") == InputState::twin_fock(2));
  CHECK(InputState::from_name("single") == InputState::single_photon());
  CHECK_THROWS_AS(InputState::from_name("noon"), std::invalid_argument);
  CHECK_THROWS_AS(InputState::twin_fock(0), std::domain_error);
  CHECK(InputState::twin_fock(2).total_photons() == 4);
  CHECK(InputState::single_photon().total_photons() == 1);
}
