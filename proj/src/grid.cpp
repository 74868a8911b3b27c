#include "annulus/grid.hpp"

#include <cmath>
#include <numbers>

namespace annulus {

LogPolarGrid build_grid(double tau, Eigen::Index n_s, Eigen::Index n_theta) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("build_grid: tau must be positive");
  if (n_s < 4) throw std::invalid_argument("build_grid: n_s must be at least 4");
  if (n_theta < 8 || n_theta % 2 != 0)
    throw std::invalid_argument("build_grid: n_theta must be even and at least 8");

  LogPolarGrid g;
  g.tau = tau;
  g.n_s = n_s;
  g.n_theta = n_theta;
  g.ds = tau / static_cast<double>(n_s - 1);
  g.dtheta = 2.0 * std::numbers::pi / static_cast<double>(n_theta);
  g.s = Eigen::ArrayXd::LinSpaced(n_s, 0.0, tau);
  g.theta = g.dtheta * Eigen::ArrayXd::LinSpaced(n_theta, 0.0, static_cast<double>(n_theta - 1));
  return g;
}

Eigen::ArrayXd quadrature_weights_s(const LogPolarGrid& grid) {
  Eigen::ArrayXd w = Eigen::ArrayXd::Constant(grid.n_s, grid.ds);
  w[0] *= 0.5;
  w[grid.n_s - 1] *= 0.5;
  return w;
}

double integrate(const LogPolarGrid& grid, const Eigen::ArrayXXd& nodal) {
  const Eigen::ArrayXd row_sums = nodal.rowwise().sum();
  return grid.dtheta * (row_sums * quadrature_weights_s(grid)).sum();
}

Eigen::ArrayXXcd grid_points(const LogPolarGrid& grid) {
  Eigen::ArrayXXcd z(grid.n_s, grid.n_theta);
  for (Eigen::Index i = 0; i < grid.n_s; ++i) {
    const double r = std::exp(grid.s[i]);
    for (Eigen::Index j = 0; j < grid.n_theta; ++j)
      z(i, j) = Complex(r * std::cos(grid.theta[j]), r * std::sin(grid.theta[j]));
  }
  return z;
}

}  // namespace annulus
