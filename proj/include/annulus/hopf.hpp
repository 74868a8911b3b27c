#pragma once

#include "annulus/grid.hpp"

namespace annulus {

/// Least-squares fit of z^2 * phi(z) against a real constant c. A stationary
/// map on an annulus has z^2*phi identically equal to a real constant; the
/// residual measures both holomorphy and realness of the candidate's Hopf
/// product at once.
struct HopfFit {
  double c = 0.0;              ///< fitted real constant
  double residual = 0.0;       ///< relative L2 misfit of z^2*phi against c
  bool sign_consistent = true; ///< sign(c) matches the moduli-order prediction
};

/// Hopf product phi = h_z * conj(h_zbar) evaluated nodewise from the
/// log-polar Wirtinger formulas h_z = e^{-(s+i theta)} (f_s - i f_theta)/2,
/// h_zbar = e^{-(s-i theta)} (f_s + i f_theta)/2.
ComplexField hopf_field(const ComplexField& f);

/// Real least-squares fit of z^2*phi over the grid, excluding nodes within
/// two cells of either s-boundary (one-sided stencils pollute the Wirtinger
/// derivatives there). residual = sqrt(sum |z^2 phi - c|^2 / sum |z^2 phi|^2),
/// defined as 0 when both sums vanish. sign_consistent is left true.
HopfFit fit_constant(const ComplexField& phi);

/// Same fit, with sign_consistent set from the moduli order: c > 0 expected
/// when tau < modstar, c < 0 when tau > modstar, |c| <= sign_tol when equal
/// (the comparison carries the sign_tol slack in all three cases).
HopfFit fit_constant(const ComplexField& phi, double tau, double modstar,
                     double sign_tol = 1e-3);

}  // namespace annulus
