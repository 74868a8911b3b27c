#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace annulus {

/// Round annulus A(r, R) = { r < |z| < R }.
struct Annulus {
  double r_inner = 1.0;
  double r_outer = 2.0;
};

///
/// Target domain: the affine image phi(w) = w + delta*conj(w) of the circular
/// annulus A(1, R*). delta = 0 is the round annulus itself; 0 < delta < 1
/// shears it into a pair of concentric ellipses with axis ratio
/// (1+delta)/(1-delta).
///
struct TargetDomain {
  Annulus base{1.0, 2.0};  ///< A(1, R*), r_inner is always 1
  double shear = 0.0;      ///< delta in [0, 1)
};

/// Validates radii and returns the annulus. Throws std::invalid_argument.
inline Annulus make_annulus(double r_inner, double r_outer) {
  if (!(r_inner > 0.0) || !(r_outer > r_inner) || !std::isfinite(r_outer))
    throw std::invalid_argument("annulus radii must satisfy 0 < r_inner < r_outer < inf");
  return Annulus{r_inner, r_outer};
}

/// Validates R* > 1 and 0 <= delta < 1. Throws std::invalid_argument.
inline TargetDomain make_target(double rstar, double delta) {
  if (!(rstar > 1.0) || !std::isfinite(rstar))
    throw std::invalid_argument("target outer radius must satisfy R* > 1");
  if (!(delta >= 0.0 && delta < 1.0))
    throw std::invalid_argument("shear must satisfy 0 <= delta < 1");
  return TargetDomain{Annulus{1.0, rstar}, delta};
}

/// Conformal modulus log(r_outer / r_inner); scale-invariant.
inline double modulus(const Annulus& a) { return std::log(a.r_outer / a.r_inner); }

/// Area pi*(R^2 - r^2) of the round annulus.
inline double area(const Annulus& a) {
  return std::numbers::pi * (a.r_outer * a.r_outer - a.r_inner * a.r_inner);
}

/// Area of the sheared target: det Dphi = 1 - delta^2 scales the base area.
inline double area(const TargetDomain& t) {
  return (1.0 - t.shear * t.shear) * area(t.base);
}

/// Lower bound 2*|target| for the Dirichlet energy of any deformation onto
/// the target; every computed minimizer energy must exceed this value.
inline double energy_lower_bound(const TargetDomain& t) { return 2.0 * area(t); }

/// Distance between the two boundary components of the target (attained on
/// the minor axis for sheared targets).
inline double boundary_gap(const TargetDomain& t) {
  return (t.base.r_outer - t.base.r_inner) * (1.0 - t.shear);
}

/// Diameter of the target region (major-axis extent of the outer boundary).
inline double diameter(const TargetDomain& t) {
  return 2.0 * t.base.r_outer * (1.0 + t.shear);
}

/// The shear map phi(w) = w + delta*conj(w) applied pointwise.
template <class Scalar>
std::complex<Scalar> shear_map(std::complex<Scalar> w, Scalar delta) {
  return w + delta * std::conj(w);
}

}  // namespace annulus
