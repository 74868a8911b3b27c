#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace annulus {

///
/// Closed-form reference values for energy-minimal maps between circular
/// annuli A(1,R) -> A(1,R*). Everything here is an exact formula; the rest of
/// the library is tested against these. All functions are templated on the
/// scalar so tests can cross-check double evaluation against long double.
///

/// Upper end of the radii range admitting an energy-minimal diffeomorphism:
/// R <= Rstar + sqrt(Rstar^2 - 1).
template <class T>
T nitsche_range_max(T Rstar) {
  return Rstar + std::sqrt(Rstar * Rstar - T(1));
}

/// Critical source modulus arccosh(Rstar): for tau beyond it the minimizer
/// collapses an inner band onto the unit circle.
template <class T>
T critical_tau(T Rstar) {
  if (!(Rstar > T(1))) throw std::domain_error("critical_tau requires Rstar > 1");
  return std::log(nitsche_range_max(Rstar));
}

/// Inverse threshold: the smallest target modulus admitting a minimal
/// diffeomorphism from a source of modulus tau, log(cosh(tau)).
template <class T>
T critical_modstar(T tau) {
  if (!(tau > T(0))) throw std::domain_error("critical_modstar requires tau > 0");
  return std::log(std::cosh(tau));
}

/// Radial-map parameter lambda = R(R - Rstar)/(R*Rstar - 1) of the
/// energy-minimal map h(z) = (z + lambda/conj(z))/(1 + lambda) on A(1,R).
/// Requires 1 < R <= Rstar + sqrt(Rstar^2-1) (and Rstar > 1); the result is
/// guaranteed in (-1, 1], clamped against roundoff at the transition point.
template <class T>
T nitsche_lambda(T R, T Rstar) {
  if (!(R > T(1)) || !(Rstar > T(1)))
    throw std::domain_error("nitsche_lambda requires R > 1 and Rstar > 1");
  if (R > nitsche_range_max(Rstar) * (T(1) + T(1e-12)))
    throw std::domain_error("nitsche_lambda: R beyond the diffeomorphism range");
  T lam = R * (R - Rstar) / (R * Rstar - T(1));
  return lam > T(1) ? T(1) : lam;
}

/// Dirichlet energy of the lambda-map on A(1,R):
/// 2*pi*(R^2-1)(R^2+lambda^2) / (R^2 (1+lambda)^2).
template <class T>
T nitsche_energy(T R, T lambda) {
  if (!(R > T(1))) throw std::domain_error("nitsche_energy requires R > 1");
  if (!(lambda > T(-1) && lambda <= T(1)))
    throw std::domain_error("nitsche_energy requires lambda in (-1, 1]");
  const T pi = std::numbers::pi_v<T>;
  const T R2 = R * R;
  const T opl = T(1) + lambda;
  return T(2) * pi * (R2 - T(1)) * (R2 + lambda * lambda) / (R2 * opl * opl);
}

/// dE/dtau of the minimal energy at tau = log R (within the diffeomorphism
/// range): 8*pi*R*(R-Rstar)(R*Rstar-1)/(R^2-1)^2.
template <class T>
T energy_slope(T R, T Rstar) {
  if (!(R > T(1)) || !(Rstar > T(1)))
    throw std::domain_error("energy_slope requires R > 1 and Rstar > 1");
  if (R > nitsche_range_max(Rstar) * (T(1) + T(1e-12)))
    throw std::domain_error("energy_slope: R beyond the diffeomorphism range");
  const T pi = std::numbers::pi_v<T>;
  const T d = R * R - T(1);
  return T(8) * pi * R * (R - Rstar) * (R * Rstar - T(1)) / (d * d);
}

/// d^2E/dtau^2: (8*pi*R/(R^2-1)^3)(Rstar*R^2 - 2R + Rstar)(2*R*Rstar - R^2 - 1);
/// positive strictly inside the range, zero at the transition point.
template <class T>
T energy_second_derivative(T R, T Rstar) {
  if (!(R > T(1)) || !(Rstar > T(1)))
    throw std::domain_error("energy_second_derivative requires R > 1 and Rstar > 1");
  if (R > nitsche_range_max(Rstar) * (T(1) + T(1e-12)))
    throw std::domain_error("energy_second_derivative: R beyond the diffeomorphism range");
  const T pi = std::numbers::pi_v<T>;
  const T d = R * R - T(1);
  return T(8) * pi * R / (d * d * d) * (Rstar * R * R - T(2) * R + Rstar) *
         (T(2) * R * Rstar - R * R - T(1));
}

/// Hopf constant of the lambda-map: c = -lambda/(1+lambda)^2.
template <class T>
T nitsche_hopf_c(T lambda) {
  const T opl = T(1) + lambda;
  return -lambda / (opl * opl);
}

/// Minimal Dirichlet energy over maps A(1,e^tau) onto A(1,Rstar):
/// the lambda-map energy for tau <= arccosh(Rstar), and the affine branch
/// 2*pi*(tau - tau_c) + E(tau_c) with slope exactly 2*pi beyond (an inner
/// band collapses onto the unit circle). Continuous and C^1 at tau_c.
template <class T>
T min_energy_annulus(T tau, T Rstar) {
  if (!(tau > T(0))) throw std::domain_error("min_energy_annulus requires tau > 0");
  const T tau_c = critical_tau(Rstar);
  const T pi = std::numbers::pi_v<T>;
  if (tau <= tau_c) {
    const T R = std::exp(tau);
    return nitsche_energy(R, nitsche_lambda(R, Rstar));
  }
  const T Rc = nitsche_range_max(Rstar);
  return T(2) * pi * (tau - tau_c) + nitsche_energy(Rc, T(1));
}

/// Gap function Lambda(t) = (log t - log(1 + log t))/(2 + log t) for t >= 1;
/// nonnegative and nondecreasing, Lambda(1) = 0.
template <class T>
T upsilon_lambda(T t) {
  if (!(t >= T(1))) throw std::domain_error("upsilon_lambda requires t >= 1");
  const T lt = std::log(t);
  return (lt - std::log(T(1) + lt)) / (T(2) + lt);
}

/// Nonexistence threshold factor
/// Upsilon(tau) = exp(-pi^2/(2 tau)) * Lambda(coth(pi^2/(2 tau))),
/// nondecreasing in tau with limit 1 as tau -> infinity.
template <class T>
T upsilon(T tau) {
  if (!(tau > T(0))) throw std::domain_error("upsilon requires tau > 0");
  const T u = std::numbers::pi_v<T> * std::numbers::pi_v<T> / (T(2) * tau);
  return std::exp(-u) * upsilon_lambda(T(1) / std::tanh(u));
}

/// Upper bound (modstar/tau + tau/modstar) * area_star for the minimal
/// energy; meets the lower bound 2*area_star exactly when tau = modstar.
template <class T>
T upper_energy_bound(T tau, T modstar, T area_star) {
  if (!(tau > T(0) && modstar > T(0) && area_star > T(0)))
    throw std::domain_error("upper_energy_bound requires positive arguments");
  return (modstar / tau + tau / modstar) * area_star;
}

/// Green's function of the unit disk, log |(1 - z*conj(zeta))/(z - zeta)|.
/// Rejects points outside the open disk and coincident points.
template <class T>
T green_disk(std::complex<T> z, std::complex<T> zeta) {
  if (!(std::abs(z) < T(1) && std::abs(zeta) < T(1)))
    throw std::domain_error("green_disk requires |z| < 1 and |zeta| < 1");
  if (z == zeta) throw std::domain_error("green_disk: coincident points");
  return std::log(std::abs((T(1) - z * std::conj(zeta)) / (z - zeta)));
}

/// Lower bound log coth(pi^2/(4 log R)) for the Green function of A(1/R, R)
/// at symmetric points; positive for R > 1, -> 0 as R -> 1.
template <class T>
T green_lower_bound(T R) {
  if (!(R > T(1))) throw std::domain_error("green_lower_bound requires R > 1");
  // log coth(x) = log1p(e^{-2x}) - log1p(-e^{-2x}): stable when coth(x) ~ 1.
  const T x = std::numbers::pi_v<T> * std::numbers::pi_v<T> / (T(4) * std::log(R));
  const T q = std::exp(T(-2) * x);
  return std::log1p(q) - std::log1p(-q);
}

/// Hopf product g_z * conj(g_zbar) of the shear-composed radial map:
/// (1/4)(1 - delta/z^2)(delta - 1/z^2). Of the stationary form c/z^2 only
/// when delta = 0 (then c = -1/4).
template <class T>
std::complex<T> affine_hopf(std::complex<T> z, T delta) {
  if (z == std::complex<T>(0)) throw std::domain_error("affine_hopf requires z != 0");
  if (!(delta >= T(0) && delta < T(1)))
    throw std::domain_error("affine_hopf requires 0 <= delta < 1");
  const std::complex<T> iz2 = T(1) / (z * z);
  return T(0.25) * (T(1) - delta * iz2) * (delta - iz2);
}

/// Whether affine_hopf(., delta) lies in the stationary family c/z^2.
inline bool is_czsq_form(double delta) { return delta == 0.0; }

/// Explicit energy lower bound rho_Y^2 * d / diam_X from the two-component
/// separation geometry (rho_Y: gap between the target's boundary components,
/// d: least diameter of a bounded complementary component of the source,
/// diam_X: diameter of the source).
template <class T>
T appendix_energy_bound(T rho_Y, T d, T diam_X) {
  if (!(rho_Y > T(0) && d > T(0) && diam_X > T(0)))
    throw std::domain_error("appendix_energy_bound requires positive arguments");
  return rho_Y * rho_Y * d / diam_X;
}

/// Bundle of the closed-form quantities for one (R, Rstar) pair.
struct NitscheSolution {
  double R = 0.0;       ///< source outer radius, R = e^tau
  double Rstar = 0.0;   ///< target outer radius
  double lambda = 0.0;  ///< radial-map parameter, in (-1, 1]
  double energy = 0.0;  ///< minimal Dirichlet energy
  double slope = 0.0;   ///< dE/dtau
  double second = 0.0;  ///< d^2E/dtau^2
  double hopf_c = 0.0;  ///< -lambda/(1+lambda)^2
};

/// Evaluates the full closed-form bundle; same preconditions as
/// nitsche_lambda.
inline NitscheSolution nitsche_solution(double R, double Rstar) {
  NitscheSolution n;
  n.R = R;
  n.Rstar = Rstar;
  n.lambda = nitsche_lambda(R, Rstar);
  n.energy = nitsche_energy(R, n.lambda);
  n.slope = energy_slope(R, Rstar);
  n.second = energy_second_derivative(R, Rstar);
  n.hopf_c = nitsche_hopf_c(n.lambda);
  return n;
}

}  // namespace annulus
