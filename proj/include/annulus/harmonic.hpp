#pragma once

#include "annulus/domain.hpp"
#include "annulus/grid.hpp"

namespace annulus {

/// Boolean mask marking an open grid subregion; complement nodes carry fixed
/// boundary data. The masked region must not touch grid rows 0 or n_s-1
/// (compact containment), so the five-point stencil never reaches outside.
struct RegionMask {
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> inside;  ///< n_s x n_theta
};

/// Validates shape and compact containment. Throws std::invalid_argument.
RegionMask make_mask(const LogPolarGrid& grid,
                     Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> inside);

/// Solves the five-point discrete Laplace equation in (s, theta) inside the
/// mask with the field's own values as Dirichlet data on the complement
/// (harmonicity is conformally invariant, so the flat log-polar stencil is
/// harmonic in z too). Conjugate gradients, diagonally preconditioned, to
/// relative residual 1e-10. Throws std::runtime_error on iteration-limit
/// failure.
ComplexField laplace_solve(const ComplexField& boundary, const RegionMask& mask);

/// Dirichlet energy in the nearest-neighbour difference form matched to the
/// five-point stencil: the sum over grid edges (forward in s, periodic
/// forward in theta) of |dv/h|^2 weighted by the cell measure ds*dtheta.
/// laplace_solve returns the exact minimizer of this form among fields that
/// agree with the data outside the mask, so Dirichlet's principle holds in it
/// with equality-grade slack for every field and mask. Energies built on
/// wider stencils (dirichlet) also drop for all but few-node masks, where the
/// stencil reaches across the replaced region and can tick up by O(h^2).
double five_point_energy(const ComplexField& f);

/// Replaces f inside the mask by the harmonic extension of its own trace;
/// idempotent to solver tolerance, and never increases the matched discrete
/// energy five_point_energy (Dirichlet's principle, exact in that quadratic
/// form up to the solver residual).
ComplexField poisson_modify(const ComplexField& f, const RegionMask& mask);

/// Conformal modulus of the target via capacity: solves the discrete
/// Dirichlet problem u = 0 on the inner boundary, u = 1 on the outer
/// boundary of A(1,R*) in the shear-pullback metric (bilinear quads on an
/// n_s x n_theta log-polar grid of the target), and returns
/// 2*pi / integral(|grad u|^2). A second solve at half resolution guards
/// against under-resolution: disagreement beyond 1% throws std::runtime_error.
double capacity_modulus(const TargetDomain& t, Eigen::Index n_s, Eigen::Index n_theta);

}  // namespace annulus
