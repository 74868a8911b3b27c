#include "annulus/harmonic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace annulus {

RegionMask make_mask(const LogPolarGrid& grid,
                     Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> inside) {
  if (inside.rows() != grid.n_s || inside.cols() != grid.n_theta)
    throw std::invalid_argument("make_mask: mask shape does not match the grid");
  if (inside.row(0).any() || inside.row(grid.n_s - 1).any())
    throw std::invalid_argument("make_mask: mask must not touch the s-boundary rows");
  return RegionMask{std::move(inside)};
}

namespace {

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Applies the negated five-point Laplacian (SPD form) to a field that is
/// zero outside the mask; output is restricted to the mask.
Eigen::ArrayXXcd apply_neg_laplace(const Eigen::ArrayXXcd& w, const BoolArray& inside,
                                   double inv_ds2, double inv_dt2) {
  const Eigen::Index n = w.rows(), m = w.cols();
  Eigen::ArrayXXcd out = Eigen::ArrayXXcd::Zero(n, m);
  const double diag = 2.0 * (inv_ds2 + inv_dt2);
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!inside(i, j)) continue;
      const Eigen::Index jm = (j + m - 1) % m, jp = (j + 1) % m;
      out(i, j) = diag * w(i, j) - inv_ds2 * (w(i + 1, j) + w(i - 1, j)) -
                  inv_dt2 * (w(i, jp) + w(i, jm));
    }
  return out;
}

double masked_norm2(const Eigen::ArrayXXcd& a, const BoolArray& inside) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (inside(i, j)) acc += std::norm(a(i, j));
  return acc;
}

double masked_dot_re(const Eigen::ArrayXXcd& a, const Eigen::ArrayXXcd& b,
                     const BoolArray& inside) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (inside(i, j)) acc += std::real(std::conj(a(i, j)) * b(i, j));
  return acc;
}

}  // namespace

ComplexField laplace_solve(const ComplexField& boundary, const RegionMask& mask) {
  const LogPolarGrid& g = boundary.grid;
  const BoolArray& inside = mask.inside;
  if (inside.rows() != g.n_s || inside.cols() != g.n_theta)
    throw std::invalid_argument("laplace_solve: mask shape does not match the field");
  if (!inside.any()) return boundary;

  const double inv_ds2 = 1.0 / (g.ds * g.ds);
  const double inv_dt2 = 1.0 / (g.dtheta * g.dtheta);

  // Dirichlet lift: data outside the mask, zero inside; the unknown w lives
  // inside and solves A w = -A u_b restricted to the mask.
  Eigen::ArrayXXcd ub = boundary.values;
  for (Eigen::Index i = 0; i < g.n_s; ++i)
    for (Eigen::Index j = 0; j < g.n_theta; ++j)
      if (inside(i, j)) ub(i, j) = Complex(0.0, 0.0);

  Eigen::ArrayXXcd b = -apply_neg_laplace(ub, inside, inv_ds2, inv_dt2);
  // apply_neg_laplace reads neighbours regardless of mask membership, which
  // is exactly the boundary coupling here because ub vanishes inside.
  // (The diagonal term contributes nothing: ub is zero on masked nodes.)

  Eigen::ArrayXXcd w = Eigen::ArrayXXcd::Zero(g.n_s, g.n_theta);
  Eigen::ArrayXXcd r = b;
  const double bnorm = std::sqrt(masked_norm2(b, inside));
  const double tol = 1e-10 * std::max(bnorm, 1e-300);
  const double inv_diag = 1.0 / (2.0 * (inv_ds2 + inv_dt2));

  Eigen::ArrayXXcd z = r * inv_diag;
  Eigen::ArrayXXcd p = z;
  double rz = masked_dot_re(r, z, inside);
  const long max_iter = 200000;
  long it = 0;
  while (std::sqrt(masked_norm2(r, inside)) > tol) {
    if (++it > max_iter)
      throw std::runtime_error("laplace_solve: conjugate gradients hit the iteration limit");
    const Eigen::ArrayXXcd Ap = apply_neg_laplace(p, inside, inv_ds2, inv_dt2);
    const double alpha = rz / masked_dot_re(p, Ap, inside);
    w += alpha * p;
    r -= alpha * Ap;
    z = r * inv_diag;
    const double rz_new = masked_dot_re(r, z, inside);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }

  ComplexField out = boundary;
  for (Eigen::Index i = 0; i < g.n_s; ++i)
    for (Eigen::Index j = 0; j < g.n_theta; ++j)
      if (inside(i, j)) out.values(i, j) = w(i, j);
  return out;
}

double five_point_energy(const ComplexField& f) {
  const LogPolarGrid& g = f.grid;
  const double ws = g.dtheta / g.ds;  // |dv|^2 / ds^2 * (ds * dtheta)
  const double wt = g.ds / g.dtheta;
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < g.n_s; ++i)
    for (Eigen::Index j = 0; j < g.n_theta; ++j)
      acc += ws * std::norm(f.values(i + 1, j) - f.values(i, j));
  for (Eigen::Index i = 0; i < g.n_s; ++i)
    for (Eigen::Index j = 0; j < g.n_theta; ++j)
      acc += wt * std::norm(f.values(i, (j + 1) % g.n_theta) - f.values(i, j));
  return acc;
}

ComplexField poisson_modify(const ComplexField& f, const RegionMask& mask) {
  return laplace_solve(f, mask);
}

namespace {

/// Capacity of A(1,R*) in the shear-pullback metric on the (s, theta)
/// rectangle, discretized with bilinear quads (2x2 Gauss, exact for the
/// element integrands). The metric coefficients depend on theta only:
///   a = ((1+d^2) - 2d cos 2t)/(1-d^2), b = 4d sin 2t/(1-d^2),
///   c = ((1+d^2) + 2d cos 2t)/(1-d^2),  det = 1 (uniformly elliptic).
class CapacityProblem {
 public:
  CapacityProblem(double delta, double taustar, Eigen::Index ns, Eigen::Index nt)
      : ns_(ns), nt_(nt), ds_(taustar / static_cast<double>(ns - 1)),
        dt_(2.0 * std::numbers::pi / static_cast<double>(nt)), a_(nt), b_(nt), c_(nt) {
    const double d2 = delta * delta, den = 1.0 - d2;
    for (Eigen::Index j = 0; j < nt; ++j) {
      const double tc = (static_cast<double>(j) + 0.5) * dt_;  // cell center
      a_[j] = ((1.0 + d2) - 2.0 * delta * std::cos(2.0 * tc)) / den;
      b_[j] = 4.0 * delta * std::sin(2.0 * tc) / den;
      c_[j] = ((1.0 + d2) + 2.0 * delta * std::cos(2.0 * tc)) / den;
    }
  }

  /// Energy form Q(v) = sum over cells of the metric integrand.
  double energy(const Eigen::ArrayXXd& v) const {
    double acc = 0.0;
    cell_loop(v, [&](Eigen::Index, Eigen::Index j, double vs, double vt, double w,
                     double, double) { acc += w * (a_[j] * vs * vs + b_[j] * vs * vt +
                                                   c_[j] * vt * vt); });
    return acc;
  }

  /// One half of the gradient of Q: the SPD operator for CG. Rows 0 and
  /// ns-1 are Dirichlet rows and stay zero.
  Eigen::ArrayXXd apply(const Eigen::ArrayXXd& v) const {
    Eigen::ArrayXXd out = Eigen::ArrayXXd::Zero(ns_, nt_);
    cell_loop(v, [&](Eigen::Index i, Eigen::Index j, double vs, double vt, double w,
                     double xi, double eta) {
      const double es = a_[j] * vs + 0.5 * b_[j] * vt;
      const double et = 0.5 * b_[j] * vs + c_[j] * vt;
      const Eigen::Index jp = (j + 1) % nt_;
      out(i, j) += w * (-es * (1.0 - eta) / ds_ - et * (1.0 - xi) / dt_);
      out(i + 1, j) += w * (es * (1.0 - eta) / ds_ - et * xi / dt_);
      out(i, jp) += w * (-es * eta / ds_ + et * (1.0 - xi) / dt_);
      out(i + 1, jp) += w * (es * eta / ds_ + et * xi / dt_);
    });
    out.row(0).setZero();
    out.row(ns_ - 1).setZero();
    return out;
  }

  /// Diagonal of the operator, for Jacobi preconditioning.
  Eigen::ArrayXXd diagonal() const {
    Eigen::ArrayXXd diag = Eigen::ArrayXXd::Zero(ns_, nt_);
    for (Eigen::Index i = 0; i + 1 < ns_; ++i)
      for (Eigen::Index j = 0; j < nt_; ++j) {
        const Eigen::Index jp = (j + 1) % nt_;
        for (const double xi : {gauss_lo, gauss_hi})
          for (const double eta : {gauss_lo, gauss_hi}) {
            const double w = 0.25 * ds_ * dt_;
            const double gs[4] = {-(1.0 - eta) / ds_, (1.0 - eta) / ds_, -eta / ds_,
                                  eta / ds_};
            const double gt[4] = {-(1.0 - xi) / dt_, -xi / dt_, (1.0 - xi) / dt_,
                                  xi / dt_};
            const Eigen::Index nodes_i[4] = {i, i + 1, i, i + 1};
            const Eigen::Index nodes_j[4] = {j, j, jp, jp};
            for (int k = 0; k < 4; ++k)
              diag(nodes_i[k], nodes_j[k]) +=
                  w * (a_[j] * gs[k] * gs[k] + b_[j] * gs[k] * gt[k] +
                       c_[j] * gt[k] * gt[k]);
          }
      }
    diag.row(0).setOnes();
    diag.row(ns_ - 1).setOnes();
    return diag;
  }

  Eigen::Index ns() const { return ns_; }
  Eigen::Index nt() const { return nt_; }
  double ds() const { return ds_; }

 private:
  static constexpr double gauss_lo = 0.5 - 0.28867513459481287;  // (1 - 1/sqrt3)/2
  static constexpr double gauss_hi = 0.5 + 0.28867513459481287;

  template <class F>
  void cell_loop(const Eigen::ArrayXXd& v, F&& f) const {
    for (Eigen::Index i = 0; i + 1 < ns_; ++i)
      for (Eigen::Index j = 0; j < nt_; ++j) {
        const Eigen::Index jp = (j + 1) % nt_;
        const double v00 = v(i, j), v10 = v(i + 1, j);
        const double v01 = v(i, jp), v11 = v(i + 1, jp);
        for (const double xi : {gauss_lo, gauss_hi})
          for (const double eta : {gauss_lo, gauss_hi}) {
            const double vs = ((v10 - v00) * (1.0 - eta) + (v11 - v01) * eta) / ds_;
            const double vt = ((v01 - v00) * (1.0 - xi) + (v11 - v10) * xi) / dt_;
            f(i, j, vs, vt, 0.25 * ds_ * dt_, xi, eta);
          }
      }
  }

  Eigen::Index ns_, nt_;
  double ds_, dt_;
  Eigen::ArrayXd a_, b_, c_;
};

double capacity_once(const TargetDomain& t, Eigen::Index ns, Eigen::Index nt) {
  const double taustar = modulus(t.base);
  const CapacityProblem prob(t.shear, taustar, ns, nt);

  // Lift v = s/tau* carries the Dirichlet data (0 inner, 1 outer); solve for
  // the interior correction w with zero boundary rows.
  Eigen::ArrayXXd lift(ns, nt);
  for (Eigen::Index i = 0; i < ns; ++i)
    lift.row(i).setConstant(static_cast<double>(i) / static_cast<double>(ns - 1));

  Eigen::ArrayXXd b = -prob.apply(lift);
  const Eigen::ArrayXXd diag = prob.diagonal();

  Eigen::ArrayXXd w = Eigen::ArrayXXd::Zero(ns, nt);
  Eigen::ArrayXXd r = b;
  Eigen::ArrayXXd z = r / diag;
  Eigen::ArrayXXd p = z;
  double rz = (r * z).sum();
  const double tol = 1e-10 * std::max(std::sqrt((b * b).sum()), 1e-300);
  const long max_iter = 200000;
  long it = 0;
  while (std::sqrt((r * r).sum()) > tol) {
    if (++it > max_iter)
      throw std::runtime_error("capacity_modulus: conjugate gradients hit the iteration limit");
    const Eigen::ArrayXXd Ap = prob.apply(p);
    const double alpha = rz / (p * Ap).sum();
    w += alpha * p;
    r -= alpha * Ap;
    z = r / diag;
    const double rz_new = (r * z).sum();
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }

  return prob.energy(lift + w);
}

}  // namespace

double capacity_modulus(const TargetDomain& t, Eigen::Index n_s, Eigen::Index n_theta) {
  if (n_s < 4 || n_theta < 8 || n_theta % 2 != 0)
    throw std::invalid_argument("capacity_modulus: resolution must be at least 4 x 8 (even)");
  const double two_pi = 2.0 * std::numbers::pi;
  const double fine = two_pi / capacity_once(t, n_s, n_theta);

  // Guard against under-resolution: a half-resolution solve must agree.
  const Eigen::Index ns2 = std::max<Eigen::Index>(4, (n_s + 1) / 2);
  Eigen::Index nt2 = std::max<Eigen::Index>(8, n_theta / 2);
  if (nt2 % 2 != 0) ++nt2;
  const double coarse = two_pi / capacity_once(t, ns2, nt2);
  if (std::abs(fine - coarse) > 0.01 * std::abs(fine))
    throw std::runtime_error(
        "capacity_modulus: resolution too coarse (half-resolution value disagrees by > 1%)");
  return fine;
}

}  // namespace annulus
