#include "annulus/hopf.hpp"

#include <cmath>

#include "annulus/operators.hpp"

namespace annulus {

ComplexField hopf_field(const ComplexField& f) {
  const LogPolarGrid& g = f.grid;
  const Eigen::ArrayXXcd fs = d_s(f.values, g.ds);
  const Eigen::ArrayXXcd ft = d_theta(f.values, g.dtheta);
  const Complex iunit(0.0, 1.0);

  ComplexField phi{g, Eigen::ArrayXXcd(g.n_s, g.n_theta)};
  for (Eigen::Index i = 0; i < g.n_s; ++i) {
    const double es = std::exp(-g.s[i]);
    for (Eigen::Index j = 0; j < g.n_theta; ++j) {
      const Complex ph = std::polar(es, -g.theta[j]);  // e^{-(s + i theta)}
      const Complex hz = ph * (fs(i, j) - iunit * ft(i, j)) * 0.5;
      const Complex hzb = std::conj(ph) * (fs(i, j) + iunit * ft(i, j)) * 0.5;
      phi.values(i, j) = hz * std::conj(hzb);
    }
  }
  return phi;
}

namespace {

/// z^2 * phi over the fit window: all theta, rows at least two cells away
/// from either s-boundary.
Eigen::ArrayXXcd fit_window(const ComplexField& phi) {
  const LogPolarGrid& g = phi.grid;
  const Eigen::Index lo = 2, n = g.n_s - 4;
  Eigen::ArrayXXcd v(n, g.n_theta);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e2s = std::exp(2.0 * g.s[lo + i]);
    for (Eigen::Index j = 0; j < g.n_theta; ++j)
      v(i, j) = std::polar(e2s, 2.0 * g.theta[j]) * phi.values(lo + i, j);
  }
  return v;
}

}  // namespace

HopfFit fit_constant(const ComplexField& phi) {
  const Eigen::ArrayXXcd v = fit_window(phi);
  HopfFit fit;
  const double den = v.abs2().sum();
  if (den == 0.0) return fit;  // identically zero: c = 0, residual 0
  // real least squares: sum |v - c|^2 is minimized by the mean of Re(v)
  fit.c = v.real().mean();
  fit.residual = std::sqrt((v - fit.c).abs2().sum() / den);
  return fit;
}

HopfFit fit_constant(const ComplexField& phi, double tau, double modstar,
                     double sign_tol) {
  HopfFit fit = fit_constant(phi);
  if (tau < modstar - 1e-12)
    fit.sign_consistent = fit.c > -sign_tol;
  else if (tau > modstar + 1e-12)
    fit.sign_consistent = fit.c < sign_tol;
  else
    fit.sign_consistent = std::abs(fit.c) <= sign_tol;
  return fit;
}

}  // namespace annulus
