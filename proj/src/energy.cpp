#include "annulus/energy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "annulus/harmonic.hpp"
#include "annulus/operators.hpp"

namespace annulus {

EnergyBreakdown dirichlet(const ComplexField& f) {
  const LogPolarGrid& g = f.grid;
  const Eigen::ArrayXXcd fs = d_s(f.values, g.ds);
  const Eigen::ArrayXXcd ft = d_theta(f.values, g.dtheta);
  EnergyBreakdown e;
  e.normal = integrate(g, fs.abs2());
  e.tangential = integrate(g, ft.abs2());
  e.total = e.normal + e.tangential;
  e.jacobian_integral = integrate(g, (fs.conjugate() * ft).imag());
  return e;
}

double jacobian_identity_check(const ComplexField& f, const TargetDomain& t) {
  const double a = area(t);
  return std::abs(dirichlet(f).jacobian_integral - a) / a;
}

DistortionReport distortion_integrals(const ComplexField& f) {
  const LogPolarGrid& g = f.grid;
  const Eigen::ArrayXXcd fs = d_s(f.values, g.ds);
  const Eigen::ArrayXXcd ft = d_theta(f.values, g.dtheta);
  const Eigen::ArrayXd ws = quadrature_weights_s(g);
  const double inf = std::numeric_limits<double>::infinity();

  DistortionReport rep;
  Eigen::Index treated_zero = 0;
  for (Eigen::Index i = 0; i < g.n_s; ++i) {
    const double w = ws[i] * g.dtheta;
    for (Eigen::Index j = 0; j < g.n_theta; ++j) {
      const double scale = std::norm(fs(i, j)) + std::norm(ft(i, j));
      // numerators and Jacobian below roundoff scale are treated as zero
      // (one-sided boundary stencils leave ~1 ulp of dust on collapse fields)
      const double a =
          std::norm(fs(i, j)) <= 1e-14 * scale ? 0.0 : std::norm(fs(i, j));
      const double b =
          std::norm(ft(i, j)) <= 1e-14 * scale ? 0.0 : std::norm(ft(i, j));
      double jac = std::imag(std::conj(fs(i, j)) * ft(i, j));
      if (jac < 1e-14 * scale) {
        jac = 0.0;
        ++treated_zero;
      }
      // quotient convention: 0 when the numerator vanishes, +Inf when the
      // Jacobian is not positive while the numerator is
      rep.kn_integral += (a == 0.0) ? 0.0 : (jac > 0.0 ? w * a / jac : inf);
      rep.kt_integral += (b == 0.0) ? 0.0 : (jac > 0.0 ? w * b / jac : inf);
    }
  }
  rep.zero_jacobian_fraction =
      static_cast<double>(treated_zero) / static_cast<double>(g.n_s * g.n_theta);
  return rep;
}

ModulusBoundsCheck reich_walczak_check(const ComplexField& f, const TargetDomain& t,
                                       double tau) {
  const double modstar =
      t.shear == 0.0 ? modulus(t.base) : capacity_modulus(t, 96, 192);
  const DistortionReport rep = distortion_integrals(f);
  const double two_pi = 2.0 * std::numbers::pi;

  ModulusBoundsCheck chk;
  chk.kn_integral = rep.kn_integral;
  chk.kt_integral = rep.kt_integral;
  chk.normal_bound = two_pi * modstar;
  chk.tangential_bound = two_pi * tau * tau / modstar;
  chk.normal_ok = rep.kn_integral >= chk.normal_bound * 0.98;
  chk.tangential_ok = rep.kt_integral >= chk.tangential_bound * 0.98;
  return chk;
}

}  // namespace annulus
