#pragma once

#include "annulus/domain.hpp"
#include "annulus/grid.hpp"

namespace annulus {

/// Dirichlet energy of a field split into its radial and angular parts,
/// plus the Jacobian integral. In log-polar coordinates the energy is the
/// flat integral of |f_s|^2 + |f_theta|^2 and the Jacobian integral is the
/// flat integral of Im(conj(f_s) f_theta).
struct EnergyBreakdown {
  double total = 0.0;              ///< normal + tangential, exactly
  double normal = 0.0;             ///< integral of |f_s|^2
  double tangential = 0.0;         ///< integral of |f_theta|^2
  double jacobian_integral = 0.0;  ///< integral of Im(conj(f_s) f_theta)
};

/// Integrals of the normal and tangential distortion quotients
/// K_N = |f_s|^2/J and K_T = |f_theta|^2/J over (s, theta); by the log-polar
/// change of variables these equal the |z|^-2-weighted integrals over the
/// annulus. +Inf is a valid value (collapse regions).
struct DistortionReport {
  double kn_integral = 0.0;
  double kt_integral = 0.0;
  double zero_jacobian_fraction = 0.0;  ///< fraction of nodes with J treated as 0
};

/// Outcome of the two distortion-integral lower-bound checks.
struct ModulusBoundsCheck {
  bool normal_ok = false;      ///< kn_integral >= 2*pi*Mod(target) - 2%
  bool tangential_ok = false;  ///< kt_integral >= 2*pi*tau^2/Mod(target) - 2%
  double kn_integral = 0.0;
  double kt_integral = 0.0;
  double normal_bound = 0.0;      ///< 2*pi*Mod(target)
  double tangential_bound = 0.0;  ///< 2*pi*tau^2/Mod(target)
};

/// Discrete Dirichlet energy, its split, and the Jacobian integral.
EnergyBreakdown dirichlet(const ComplexField& f);

/// Relative defect |jacobian_integral - area(t)| / area(t); near zero for a
/// minimizing deformation onto t (the image covers the target exactly once).
double jacobian_identity_check(const ComplexField& f, const TargetDomain& t);

/// Pointwise distortion quotients integrated over the grid. Convention:
/// quotient 0 when the numerator vanishes, +Inf when J <= 0 with positive
/// numerator; J and the numerators are treated as zero below the roundoff
/// threshold 1e-14*(|f_s|^2+|f_theta|^2).
DistortionReport distortion_integrals(const ComplexField& f);

/// Checks the distortion-integral lower bounds for a sense-preserving
/// candidate of winding 1 from a modulus-tau annulus onto t: the weighted
/// normal distortion dominates 2*pi*Mod(t) and the weighted tangential
/// distortion dominates 2*pi*tau^2/Mod(t), each within a 2% tolerance.
/// Mod(t) is log(R*) for round targets and the capacity modulus for
/// sheared ones.
ModulusBoundsCheck reich_walczak_check(const ComplexField& f, const TargetDomain& t,
                                       double tau);

}  // namespace annulus
