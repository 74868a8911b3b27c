#include "annulus/operators.hpp"

#include <cmath>
#include <numbers>

namespace annulus {

ComplexField d_s(const ComplexField& f) {
  return ComplexField{f.grid, d_s(f.values, f.grid.ds)};
}

ComplexField d_theta(const ComplexField& f) {
  return ComplexField{f.grid, d_theta(f.values, f.grid.dtheta)};
}

int winding(const ComplexField& f, Eigen::Index row, Complex w0) {
  const Eigen::Index m = f.grid.n_theta;
  double total = 0.0;
  Complex prev = f.values(row, 0) - w0;
  if (std::abs(prev) < 1e-12)
    throw std::domain_error("winding: field vanishes relative to w0 on the row");
  for (Eigen::Index j = 1; j <= m; ++j) {
    const Complex cur = f.values(row, j % m) - w0;
    if (std::abs(cur) < 1e-12)
      throw std::domain_error("winding: field vanishes relative to w0 on the row");
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace annulus
