#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace annulus {

using Complex = std::complex<double>;

///
/// Uniform node-centered grid in log-polar coordinates (s, theta) covering the
/// source annulus A(1, e^tau): node (i,j) represents z = exp(s_i + i*theta_j)
/// with s_i = i*ds on [0, tau] (both boundaries included) and theta_j = j*dtheta
/// periodic in j.
///
struct LogPolarGrid {
  double tau = 0.0;            ///< source modulus, log of the outer radius
  Eigen::Index n_s = 0;        ///< radial sample count (>= 4)
  Eigen::Index n_theta = 0;    ///< angular sample count (>= 8, even)
  double ds = 0.0;             ///< tau / (n_s - 1)
  double dtheta = 0.0;         ///< 2*pi / n_theta
  Eigen::ArrayXd s;            ///< radial coordinates, size n_s
  Eigen::ArrayXd theta;        ///< angular coordinates, size n_theta
};

/// Complex-valued nodal field (target-plane samples) on a LogPolarGrid.
/// Rows index s, columns index theta; column n_theta wraps to column 0.
struct ComplexField {
  LogPolarGrid grid;
  Eigen::ArrayXXcd values;  ///< n_s x n_theta
};

/// Builds the uniform grid. Rejects non-positive tau, n_s < 4, and
/// n_theta < 8 or odd (the angular count must tile half-turns evenly).
LogPolarGrid build_grid(double tau, Eigen::Index n_s, Eigen::Index n_theta);

/// Trapezoidal weights in s (half weight on the boundary rows), scaled by ds.
Eigen::ArrayXd quadrature_weights_s(const LogPolarGrid& grid);

/// Quadrature of a nodal sample over [0,tau] x [0,2pi): trapezoid in s,
/// rectangle rule in theta.
double integrate(const LogPolarGrid& grid, const Eigen::ArrayXXd& nodal);

/// Nodal complex coordinates z = exp(s + i*theta) of the grid.
Eigen::ArrayXXcd grid_points(const LogPolarGrid& grid);

/// Samples a callable f(s, theta) -> complex into a field on the grid.
template <class F>
ComplexField sample_field(const LogPolarGrid& grid, F&& f) {
  ComplexField out{grid, Eigen::ArrayXXcd(grid.n_s, grid.n_theta)};
  for (Eigen::Index i = 0; i < grid.n_s; ++i)
    for (Eigen::Index j = 0; j < grid.n_theta; ++j)
      out.values(i, j) = f(grid.s[i], grid.theta[j]);
  return out;
}

}  // namespace annulus
