#pragma once

#include "annulus/grid.hpp"

namespace annulus {

///
/// Finite-difference operators on log-polar nodal arrays. Templated on the
/// Eigen array type so the same stencils serve real and complex fields.
/// d_s is the radial derivative: central differences in the interior,
/// one-sided second-order stencils on the two boundary rows (exact on fields
/// affine in s). d_theta is the periodic central difference in the angular
/// direction (exact on fields affine in theta modulo wraparound).
///

template <class D>
typename D::PlainObject d_s(const Eigen::DenseBase<D>& fin, double ds) {
  const auto& f = fin.derived();
  const Eigen::Index n = f.rows();
  const double c = 1.0 / (2.0 * ds);
  typename D::PlainObject g(n, f.cols());
  g.middleRows(1, n - 2) = (f.middleRows(2, n - 2) - f.middleRows(0, n - 2)) * c;
  g.row(0) = (-3.0 * f.row(0) + 4.0 * f.row(1) - f.row(2)) * c;
  g.row(n - 1) = (3.0 * f.row(n - 1) - 4.0 * f.row(n - 2) + f.row(n - 3)) * c;
  return g;
}

template <class D>
typename D::PlainObject d_theta(const Eigen::DenseBase<D>& fin, double dtheta) {
  const auto& f = fin.derived();
  const Eigen::Index m = f.cols();
  const double c = 1.0 / (2.0 * dtheta);
  typename D::PlainObject g(f.rows(), m);
  g.middleCols(1, m - 2) = (f.middleCols(2, m - 2) - f.middleCols(0, m - 2)) * c;
  g.col(0) = (f.col(1) - f.col(m - 1)) * c;
  g.col(m - 1) = (f.col(0) - f.col(m - 2)) * c;
  return g;
}

/// Adjoint of d_s with respect to the unweighted nodal inner product
/// (transpose of the banded stencil matrix, boundary rows included).
template <class D>
typename D::PlainObject d_s_adjoint(const Eigen::DenseBase<D>& gin, double ds) {
  const auto& u = gin.derived();
  const Eigen::Index n = u.rows();
  const double c = 1.0 / (2.0 * ds);
  typename D::PlainObject r = D::PlainObject::Zero(n, u.cols());
  // interior rows i scatter -c to i-1 and +c to i+1
  r.middleRows(2, n - 2) += u.middleRows(1, n - 2) * c;
  r.middleRows(0, n - 2) -= u.middleRows(1, n - 2) * c;
  // one-sided boundary stencils transposed
  r.row(0) += u.row(0) * (-3.0 * c);
  r.row(1) += u.row(0) * (4.0 * c);
  r.row(2) += u.row(0) * (-c);
  r.row(n - 1) += u.row(n - 1) * (3.0 * c);
  r.row(n - 2) += u.row(n - 1) * (-4.0 * c);
  r.row(n - 3) += u.row(n - 1) * c;
  return r;
}

/// Adjoint of d_theta: the periodic central-difference matrix is
/// antisymmetric, so the adjoint is its negative.
template <class D>
typename D::PlainObject d_theta_adjoint(const Eigen::DenseBase<D>& gin, double dtheta) {
  return d_theta(gin, -dtheta);
}

/// Convenience wrappers on whole fields.
ComplexField d_s(const ComplexField& f);
ComplexField d_theta(const ComplexField& f);

/// Total increment of arg(f - w0) along row i, divided by 2*pi and rounded.
/// Throws std::domain_error when |f - w0| < 1e-12 at any node on the row
/// (the degree is undefined there).
int winding(const ComplexField& f, Eigen::Index row, Complex w0);

}  // namespace annulus
