#include <doctest.h>

#include <cmath>
#include <complex>

#include "annulus/closedform.hpp"
#include "annulus/grid.hpp"
#include "annulus/hopf.hpp"

using namespace annulus;

TEST_CASE("conformal maps have vanishing Hopf product") {
  const LogPolarGrid g = build_grid(1.0, 48, 96);
  const ComplexField f =
      sample_field(g, [](double s, double th) { return std::exp(Complex(s, th)); });
  const ComplexField phi = hopf_field(f);
  // h_zbar = 0 for holomorphic maps; discretely it is O(h^2) noise
  CHECK(phi.values.abs().maxCoeff() <= 1e-3);
  // the fit weights phi by z^2, so |c| can exceed max|phi| by up to e^{2 tau}
  const HopfFit fit = fit_constant(phi);
  CHECK(std::abs(fit.c) <= 3e-3);
}

TEST_CASE("fit recovers an exactly stationary Hopf product") {
  const LogPolarGrid g = build_grid(1.2, 32, 64);
  const Eigen::ArrayXXcd z = grid_points(g);
  for (double c0 : {0.75, -0.3}) {
    ComplexField phi{g, c0 * (z * z).inverse()};
    const HopfFit fit = fit_constant(phi);
    CHECK(fit.c == doctest::Approx(c0).epsilon(1e-14));
    CHECK(fit.residual <= 1e-13);
  }
}

TEST_CASE("critical radial map has z^2 phi = -1/4") {
  // lambda = 1: f = (z + 1/conj(z))/2 maps A(1, R_c) onto A(1, Rstar)
  const double tau_c = critical_tau(2.0);
  const LogPolarGrid g = build_grid(tau_c, 64, 128);
  const ComplexField f = sample_field(g, [](double s, double th) {
    const double rho = std::cosh(s);
    return rho * std::exp(Complex(0.0, th));
  });
  const HopfFit fit = fit_constant(hopf_field(f));
  CHECK(fit.c == doctest::Approx(-0.25).epsilon(2e-3));
  CHECK(fit.residual < 1e-2);
}

TEST_CASE("shear-composed radial map leaves the stationary family") {
  const LogPolarGrid g = build_grid(1.0, 64, 128);
  const double delta = 0.5;
  // shear applied to the cosh-profile radial map (z + 1/conj(z))/2
  const ComplexField f = sample_field(g, [&](double s, double th) {
    const Complex w = std::cosh(s) * std::exp(Complex(0.0, th));
    return w + delta * std::conj(w);
  });
  const ComplexField phi = hopf_field(f);

  // nodewise agreement with the closed form (away from the s-boundaries)
  const Eigen::ArrayXXcd z = grid_points(g);
  double worst = 0.0;
  for (Eigen::Index i = 2; i < g.n_s - 2; ++i)
    for (Eigen::Index j = 0; j < g.n_theta; ++j)
      worst = std::max(worst,
                       std::abs(phi.values(i, j) - affine_hopf(z(i, j), delta)));
  CHECK(worst <= 5e-3);

  // z^2 phi is genuinely non-constant: the fit must report a large misfit
  const HopfFit fit = fit_constant(phi);
  CHECK(fit.residual > 0.1);
}

TEST_CASE("sign consistency against the moduli order") {
  const LogPolarGrid g = build_grid(1.0, 16, 32);
  const Eigen::ArrayXXcd z = grid_points(g);

  const ComplexField pos{g, Eigen::ArrayXXcd(0.5 * (z * z).inverse())};
  CHECK(fit_constant(pos, 0.5, std::log(2.0)).sign_consistent);   // tau < mod*
  CHECK(!fit_constant(pos, 1.0, std::log(2.0)).sign_consistent);  // tau > mod*

  const ComplexField neg{g, Eigen::ArrayXXcd(-0.5 * (z * z).inverse())};
  CHECK(fit_constant(neg, 1.0, std::log(2.0)).sign_consistent);
  CHECK(!fit_constant(neg, 0.5, std::log(2.0)).sign_consistent);

  // near-zero constant at the conformal point, within the sign tolerance
  const ComplexField tiny{g, Eigen::ArrayXXcd(1e-5 * (z * z).inverse())};
  CHECK(fit_constant(tiny, std::log(2.0), std::log(2.0), 1e-3).sign_consistent);
}
