#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "annulus/closedform.hpp"

using namespace annulus;

namespace {
constexpr double kPi = std::numbers::pi;
const double kE = std::exp(1.0);
// arccosh(2) = log(2 + sqrt(3)), the critical source modulus for R* = 2
constexpr double kAcosh2 = 1.3169578969248167086;
}  // namespace

TEST_CASE("critical thresholds") {
  CHECK(nitsche_range_max(2.0) ==
        doctest::Approx(3.7320508075688772935).epsilon(1e-15));
  CHECK(critical_tau(2.0) == doctest::Approx(kAcosh2).epsilon(1e-15));
  // inverse threshold at tau = 1: log(cosh 1)
  CHECK(critical_modstar(1.0) ==
        doctest::Approx(0.43378083048302718703).epsilon(1e-15));
  // the two thresholds invert each other
  for (double tau : {0.3, 0.8, 1.5, 2.5})
    CHECK(critical_tau(std::exp(critical_modstar(tau))) ==
          doctest::Approx(tau).epsilon(1e-12));
  CHECK_THROWS_AS(critical_tau(1.0), std::domain_error);
  CHECK_THROWS_AS(critical_tau(0.5), std::domain_error);
  CHECK_THROWS_AS(critical_modstar(0.0), std::domain_error);
  CHECK_THROWS_AS(critical_modstar(-1.0), std::domain_error);
}

TEST_CASE("radial map parameter lambda") {
  CHECK(nitsche_lambda(kE, 2.0) ==
        doctest::Approx(0.44009115905909955846).epsilon(1e-15));
  // rational point: lambda(1.5, 2) = 1.5*(-0.5)/2 exactly
  CHECK(nitsche_lambda(1.5, 2.0) == -0.375);
  // lambda = 1 exactly at the end of the diffeomorphism range
  CHECK(nitsche_lambda(nitsche_range_max(2.0), 2.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nitsche_lambda(std::exp(0.5), 2.0) ==
        doctest::Approx(-0.25208931344512381607).epsilon(1e-15));
  CHECK_THROWS_AS(nitsche_lambda(1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(nitsche_lambda(4.0, 2.0), std::domain_error);  // beyond range
}

TEST_CASE("minimal energy, slope, and curvature at tau = 1, Rstar = 2") {
  const double lam = nitsche_lambda(kE, 2.0);
  CHECK(nitsche_energy(kE, lam) ==
        doctest::Approx(19.864314944424518728).epsilon(1e-15));
  CHECK(min_energy_annulus(1.0, 2.0) ==
        doctest::Approx(19.864314944424518728).epsilon(1e-15));
  CHECK(energy_slope(kE, 2.0) ==
        doctest::Approx(5.3333800915968509982).epsilon(1e-14));
  CHECK(energy_second_derivative(kE, 2.0) ==
        doctest::Approx(7.3800726213715992246).epsilon(1e-14));
  CHECK(nitsche_hopf_c(lam) ==
        doctest::Approx(-0.21220845124138608847).epsilon(1e-14));
  CHECK_THROWS_AS(nitsche_energy(0.9, 0.0), std::domain_error);
  CHECK_THROWS_AS(nitsche_energy(2.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(nitsche_energy(2.0, 1.5), std::domain_error);
}

TEST_CASE("minimal energy curve: frozen samples on both branches") {
  CHECK(min_energy_annulus(0.4, 2.0) ==
        doctest::Approx(21.497502096157228286).epsilon(1e-15));
  CHECK(min_energy_annulus(0.55, 2.0) ==
        doctest::Approx(19.295700066692934885).epsilon(1e-15));
  CHECK(min_energy_annulus(0.9, 2.0) ==
        doctest::Approx(19.375227775674868488).epsilon(1e-15));
  CHECK(min_energy_annulus(1.1, 2.0) ==
        doctest::Approx(20.428530500946907949).epsilon(1e-15));
  CHECK(min_energy_annulus(kAcosh2, 2.0) ==
        doctest::Approx(21.765592370810614207).epsilon(1e-15));
  // affine branch
  CHECK(min_energy_annulus(1.8, 2.0) ==
        doctest::Approx(24.800635415601733209).epsilon(1e-15));
  CHECK(min_energy_annulus(2.2, 2.0) ==
        doctest::Approx(27.3139095384735678).epsilon(1e-15));
  // the global minimum sits at tau = log(Rstar) with energy 2*area
  CHECK(min_energy_annulus(std::log(2.0), 2.0) ==
        doctest::Approx(6.0 * kPi).epsilon(1e-15));
  CHECK_THROWS_AS(min_energy_annulus(0.0, 2.0), std::domain_error);
}

TEST_CASE("slope and curvature agree with finite differences of the energy") {
  for (double tau : {0.6, 1.0, 1.25}) {
    const double R = std::exp(tau);
    const double h = 1e-5;
    const double fd_slope =
        (min_energy_annulus(tau + h, 2.0) - min_energy_annulus(tau - h, 2.0)) /
        (2.0 * h);
    CHECK(energy_slope(R, 2.0) == doctest::Approx(fd_slope).epsilon(1e-6));
    const double h2 = 1e-3;
    const double fd_second = (min_energy_annulus(tau + h2, 2.0) -
                              2.0 * min_energy_annulus(tau, 2.0) +
                              min_energy_annulus(tau - h2, 2.0)) /
                             (h2 * h2);
    CHECK(energy_second_derivative(R, 2.0) ==
          doctest::Approx(fd_second).epsilon(1e-4));
  }
}

TEST_CASE("Hopf constant times 8 pi equals minus the slope across the range") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> rstar_dist(1.2, 4.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double rstar = rstar_dist(rng);
    std::uniform_real_distribution<double> r_dist(1.05, nitsche_range_max(rstar));
    const double r = r_dist(rng);
    const double lhs = 8.0 * kPi * nitsche_hopf_c(nitsche_lambda(r, rstar));
    const double rhs = -energy_slope(r, rstar);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("the two branches join with value and slope continuity") {
  const double tau_c = critical_tau(2.0);
  const double eps = 1e-11;
  CHECK(std::abs(min_energy_annulus(tau_c + eps, 2.0) -
                 min_energy_annulus(tau_c - eps, 2.0)) <= 1e-9);
  // one-sided slopes: the convex branch ends at exactly 2*pi (lambda = 1),
  // the affine branch has slope 2*pi by construction
  const double left_slope = energy_slope(nitsche_range_max(2.0), 2.0);
  CHECK(std::abs(left_slope - 2.0 * kPi) <= 1e-9);
  const double right_slope =
      (min_energy_annulus(tau_c + 2e-3, 2.0) - min_energy_annulus(tau_c + 1e-3, 2.0)) /
      1e-3;
  CHECK(std::abs(right_slope - 2.0 * kPi) <= 1e-9);
  // curvature vanishes at the transition
  CHECK(energy_second_derivative(nitsche_range_max(2.0), 2.0) ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("energy curve is convex with minimum at tau = log Rstar") {
  // discrete convexity on a fine grid spanning both branches
  const int m = 400;
  double prev = min_energy_annulus(0.05, 2.0);
  double prev2 = 0.0;
  bool have2 = false;
  for (int k = 1; k <= m; ++k) {
    const double tau = 0.05 + 2.45 * k / m;
    const double cur = min_energy_annulus(tau, 2.0);
    if (have2) CHECK(cur - 2.0 * prev + prev2 >= -1e-10);
    prev2 = prev;
    prev = cur;
    have2 = true;
  }
  // strict monotonicity on each side of log 2
  CHECK(min_energy_annulus(0.4, 2.0) > min_energy_annulus(0.55, 2.0));
  CHECK(min_energy_annulus(0.55, 2.0) > min_energy_annulus(std::log(2.0), 2.0));
  CHECK(min_energy_annulus(std::log(2.0), 2.0) < min_energy_annulus(0.9, 2.0));
  CHECK(min_energy_annulus(0.9, 2.0) < min_energy_annulus(1.1, 2.0));
}

TEST_CASE("nonexistence threshold functions Lambda and Upsilon") {
  CHECK(upsilon_lambda(1.0) == 0.0);  // exactly
  CHECK(upsilon_lambda(1.0 / std::tanh(1.0)) ==
        doctest::Approx(0.01385469131668665072).epsilon(1e-13));
  CHECK(upsilon(kPi * kPi / 2.0) ==
        doctest::Approx(0.0050968560991855194832).epsilon(1e-13));
  CHECK(upsilon(1e4) == doctest::Approx(0.56770605080691933465).epsilon(1e-13));
  CHECK_THROWS_AS(upsilon_lambda(0.99), std::domain_error);
  CHECK_THROWS_AS(upsilon(0.0), std::domain_error);

  // nondecreasing on a log-spaced grid, bounded by 1
  double prev = -1.0;
  for (int k = 0; k < 200; ++k) {
    const double tau = std::pow(10.0, -2.0 + 6.0 * k / 199.0);
    const double u = upsilon(tau);
    CHECK(u >= prev);
    CHECK(u < 1.0);
    prev = u;
  }
}

TEST_CASE("upper energy bound and its equality case") {
  CHECK(upper_energy_bound(1.0, std::log(2.0), 3.0 * kPi) ==
        doctest::Approx(20.12983869639238782).epsilon(1e-14));
  // meets the lower bound exactly when tau equals the target modulus
  const double m = std::log(2.0);
  CHECK(upper_energy_bound(m, m, 3.0 * kPi) ==
        doctest::Approx(6.0 * kPi).epsilon(1e-15));
  CHECK_THROWS_AS(upper_energy_bound(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(upper_energy_bound(1.0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("Green function of the disk and the annulus lower bound") {
  using C = std::complex<double>;
  CHECK(green_disk(C(0.5, 0.0), C(-0.5, 0.0)) ==
        doctest::Approx(0.22314355131420976).epsilon(1e-14));
  // symmetry
  CHECK(green_disk(C(0.3, 0.2), C(-0.1, 0.4)) ==
        doctest::Approx(green_disk(C(-0.1, 0.4), C(0.3, 0.2))).epsilon(1e-14));
  // positive inside the disk
  CHECK(green_disk(C(0.1, 0.1), C(0.2, -0.3)) > 0.0);
  CHECK_THROWS_AS(green_disk(C(1.5, 0.0), C(0.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(green_disk(C(0.5, 0.0), C(0.5, 0.0)), std::domain_error);

  CHECK(green_lower_bound(kE) ==
        doctest::Approx(0.014384014710763805569).epsilon(1e-13));
  CHECK(green_lower_bound(std::exp(0.5)) ==
        doctest::Approx(0.00010344637249987422505).epsilon(1e-12));
  CHECK(green_lower_bound(2.0) ==
        doctest::Approx(0.00161848093572661879886).epsilon(1e-12));
  // increasing in R, positive
  double prev = 0.0;
  for (double r : {1.5, 2.0, 3.0, 5.0, 10.0}) {
    const double g = green_lower_bound(r);
    CHECK(g > prev);
    prev = g;
  }
  CHECK_THROWS_AS(green_lower_bound(1.0), std::domain_error);
}

TEST_CASE("affine Hopf product") {
  using C = std::complex<double>;
  // delta = 0: z^2 * phi = -1/4 for every z
  for (const C z : {C(1.0, 0.0), C(0.5, 1.2), C(-2.0, 0.3)}) {
    const C v = z * z * affine_hopf(z, 0.0);
    CHECK(v.real() == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(std::abs(v.imag()) <= 1e-15);
  }
  // delta = 1/2 frozen point values
  CHECK(affine_hopf(C(1.0, 0.0), 0.5).real() ==
        doctest::Approx(-0.0625).epsilon(1e-15));
  CHECK(affine_hopf(C(0.0, 1.0), 0.5).real() ==
        doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(is_czsq_form(0.0));
  CHECK(!is_czsq_form(0.5));
  CHECK_THROWS_AS(affine_hopf(C(0.0, 0.0), 0.5), std::domain_error);
  CHECK_THROWS_AS(affine_hopf(C(1.0, 0.0), 1.5), std::domain_error);
}

TEST_CASE("separation-geometry energy bound") {
  CHECK(appendix_energy_bound(0.8, 2.0, 2.0 * kE) ==
        doctest::Approx(0.235442842349723085821).epsilon(1e-14));
  CHECK_THROWS_AS(appendix_energy_bound(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(appendix_energy_bound(1.0, 1.0, -1.0), std::domain_error);
}

TEST_CASE("formulas agree between double and long double evaluation") {
  const long double lam = nitsche_lambda<long double>(std::exp(1.0L), 2.0L);
  CHECK(static_cast<double>(nitsche_energy<long double>(std::exp(1.0L), lam)) ==
        doctest::Approx(nitsche_energy(kE, nitsche_lambda(kE, 2.0))).epsilon(5e-15));
  CHECK(static_cast<double>(min_energy_annulus<long double>(1.8L, 2.0L)) ==
        doctest::Approx(min_energy_annulus(1.8, 2.0)).epsilon(5e-15));
  CHECK(static_cast<double>(upsilon<long double>(3.0L)) ==
        doctest::Approx(upsilon(3.0)).epsilon(5e-15));
}
