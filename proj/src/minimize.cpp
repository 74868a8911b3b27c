#include "annulus/minimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <thread>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "annulus/operators.hpp"

namespace annulus {

PolarMapState initial_state(const LogPolarGrid& grid, const TargetDomain& t) {
  const double rstar = t.base.r_outer;
  const double alpha = std::log(rstar) / grid.tau;
  PolarMapState st{grid, Eigen::ArrayXXd(grid.n_s, grid.n_theta),
                   Eigen::ArrayXXd::Zero(grid.n_s, grid.n_theta), t};
  for (Eigen::Index i = 0; i < grid.n_s; ++i)
    st.rho.row(i).setConstant(std::clamp(std::exp(alpha * grid.s[i]), 1.0, rstar));
  return st;
}

ComplexField state_field(const PolarMapState& st) {
  const LogPolarGrid& g = st.grid;
  const double delta = st.target.shear;
  ComplexField f{g, Eigen::ArrayXXcd(g.n_s, g.n_theta)};
  for (Eigen::Index i = 0; i < g.n_s; ++i)
    for (Eigen::Index j = 0; j < g.n_theta; ++j) {
      const Complex u = std::polar(st.rho(i, j), g.theta[j] + st.psi(i, j));
      f.values(i, j) = u + delta * std::conj(u);
    }
  return f;
}

EnergyBreakdown energy_of_state(const PolarMapState& st) {
  return dirichlet(state_field(st));
}

namespace {

using SparseMat = Eigen::SparseMatrix<double>;

///
/// Bilinear finite-element matrices on the node-centered (s, theta) grid,
/// theta-periodic: the element integrals are tensor products of the 1D
/// hat-function stiffness (1/h)[[1,-1],[-1,1]] and mass (h/6)[[2,1],[1,2]].
/// The stiffness form f^T A f equals the elementwise-exact integral of
/// |f_s|^2 + |f_theta|^2 of the bilinear interpolant. Unlike wide centered
/// differences this form has no checkerboard null modes (its kernel is the
/// constant alone), so minimizers stay smooth and certify cleanly.
///
void assemble_fem(const LogPolarGrid& g, SparseMat& stiffness, SparseMat& mass) {
  const Eigen::Index n = g.n_s * g.n_theta;
  const double hs = g.ds, ht = g.dtheta;
  const double ks[2][2] = {{1.0 / hs, -1.0 / hs}, {-1.0 / hs, 1.0 / hs}};
  const double ms[2][2] = {{hs / 3.0, hs / 6.0}, {hs / 6.0, hs / 3.0}};
  const double kt[2][2] = {{1.0 / ht, -1.0 / ht}, {-1.0 / ht, 1.0 / ht}};
  const double mt[2][2] = {{ht / 3.0, ht / 6.0}, {ht / 6.0, ht / 3.0}};

  std::vector<Eigen::Triplet<double>> ta, tm;
  ta.reserve(static_cast<std::size_t>(16 * n));
  tm.reserve(static_cast<std::size_t>(16 * n));
  const auto node = [&](Eigen::Index i, Eigen::Index j) {
    return i + g.n_s * (j % g.n_theta);  // column-major: s fastest
  };
  for (Eigen::Index ci = 0; ci + 1 < g.n_s; ++ci)
    for (Eigen::Index cj = 0; cj < g.n_theta; ++cj)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d) {
              const Eigen::Index row = node(ci + a, cj + b);
              const Eigen::Index col = node(ci + c, cj + d);
              ta.emplace_back(row, col, ks[a][c] * mt[b][d] + ms[a][c] * kt[b][d]);
              tm.emplace_back(row, col, ms[a][c] * mt[b][d]);
            }
  stiffness.resize(n, n);
  stiffness.setFromTriplets(ta.begin(), ta.end());
  mass.resize(n, n);
  mass.setFromTriplets(tm.begin(), tm.end());
}

/// Objective for the projected quasi-Newton descent. The unknown vector
/// packs rho then psi (each n_s x n_theta, column-major). With
/// f = phi_delta(rho e^{i Theta}), Theta = theta + psi:
///   Re f = (1+delta) rho cos Theta,  Im f = (1-delta) rho sin Theta,
///   E = fr^T A fr + fi^T A fi,
///   dE = 2 [ (A fr) dfr + (A fi) dfi ]  with the chain rule
///   dfr/drho = (1+d) cosT, dfi/drho = (1-d) sinT,
///   dfr/dpsi = -(1+d) rho sinT, dfi/dpsi = (1-d) rho cosT.
class Objective {
 public:
  Objective(const LogPolarGrid& g, double delta) : g_(g), delta_(delta), n_(g.n_s * g.n_theta) {
    assemble_fem(g, stiffness_, mass_);
  }

  Eigen::Index size() const { return 2 * n_; }
  const SparseMat& stiffness() const { return stiffness_; }
  const SparseMat& mass() const { return mass_; }

  double energy(const Eigen::VectorXd& x) const {
    Eigen::ArrayXXd fr, fi;
    field_parts(x, fr, fi);
    const auto vr = Eigen::Map<const Eigen::VectorXd>(fr.data(), n_);
    const auto vi = Eigen::Map<const Eigen::VectorXd>(fi.data(), n_);
    return vr.dot(stiffness_ * vr) + vi.dot(stiffness_ * vi);
  }

  double energy_and_gradient(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
    const auto rho = Eigen::Map<const Eigen::ArrayXXd>(x.data(), g_.n_s, g_.n_theta);
    Eigen::ArrayXXd cosT, sinT;
    phases(x, cosT, sinT);
    const Eigen::ArrayXXd fr = (1.0 + delta_) * rho * cosT;
    const Eigen::ArrayXXd fi = (1.0 - delta_) * rho * sinT;

    const auto vr = Eigen::Map<const Eigen::VectorXd>(fr.data(), n_);
    const auto vi = Eigen::Map<const Eigen::VectorXd>(fi.data(), n_);
    const Eigen::VectorXd ar = stiffness_ * vr;
    const Eigen::VectorXd ai = stiffness_ * vi;
    const double energy = vr.dot(ar) + vi.dot(ai);

    const auto par = Eigen::Map<const Eigen::ArrayXXd>(ar.data(), g_.n_s, g_.n_theta);
    const auto pai = Eigen::Map<const Eigen::ArrayXXd>(ai.data(), g_.n_s, g_.n_theta);
    grad.resize(size());
    auto grad_rho = Eigen::Map<Eigen::ArrayXXd>(grad.data(), g_.n_s, g_.n_theta);
    auto grad_psi = Eigen::Map<Eigen::ArrayXXd>(grad.data() + n_, g_.n_s, g_.n_theta);
    grad_rho = 2.0 * ((1.0 + delta_) * par * cosT + (1.0 - delta_) * pai * sinT);
    grad_psi =
        2.0 * rho * ((1.0 - delta_) * pai * cosT - (1.0 + delta_) * par * sinT);
    return energy;
  }

 private:
  void phases(const Eigen::VectorXd& x, Eigen::ArrayXXd& cosT, Eigen::ArrayXXd& sinT) const {
    Eigen::ArrayXXd T = Eigen::Map<const Eigen::ArrayXXd>(x.data() + n_, g_.n_s, g_.n_theta);
    T.rowwise() += g_.theta.transpose();
    cosT = T.cos();
    sinT = T.sin();
  }

  void field_parts(const Eigen::VectorXd& x, Eigen::ArrayXXd& fr, Eigen::ArrayXXd& fi) const {
    const auto rho = Eigen::Map<const Eigen::ArrayXXd>(x.data(), g_.n_s, g_.n_theta);
    Eigen::ArrayXXd cosT, sinT;
    phases(x, cosT, sinT);
    fr = (1.0 + delta_) * rho * cosT;
    fi = (1.0 - delta_) * rho * sinT;
  }

  const LogPolarGrid& g_;
  double delta_;
  Eigen::Index n_;
  SparseMat stiffness_;
  SparseMat mass_;
};

/// Limited-memory BFGS with a fixed SPD preconditioner applied blockwise to
/// the rho and psi components: H0 q = gamma * Mpre^{-1} q with gamma from the
/// newest curvature pair. Mpre = stiffness + mass is grid-independent in
/// condition, which keeps iteration counts flat under refinement.
class LbfgsMemory {
 public:
  LbfgsMemory(const SparseMat& mpre, Eigen::Index block, Eigen::ArrayXd free_mask)
      : block_(block), free_mask_(std::move(free_mask)) {
    solver_.compute(mpre);
  }

  bool ok() const { return solver_.info() == Eigen::Success; }
  bool empty() const { return s_.empty(); }

  void clear() {
    s_.clear();
    y_.clear();
    inv_sy_.clear();
  }

  void push(Eigen::VectorXd snew, Eigen::VectorXd ynew) {
    const double sy = snew.dot(ynew);
    if (sy <= 1e-12 * snew.norm() * ynew.norm()) return;  // curvature too weak
    const double y_minv_y = ynew.dot(apply_minv(ynew));
    gamma_ = sy / y_minv_y;
    s_.push_back(std::move(snew));
    y_.push_back(std::move(ynew));
    inv_sy_.push_back(1.0 / sy);
    if (s_.size() > kHistory) {
      s_.pop_front();
      y_.pop_front();
      inv_sy_.pop_front();
    }
  }

  /// Two-loop recursion on q (the projected gradient); returns the descent
  /// direction -H q.
  Eigen::VectorXd direction(const Eigen::VectorXd& q0) const {
    Eigen::VectorXd q = q0;
    const std::size_t k = s_.size();
    std::vector<double> alpha(k);
    for (std::size_t idx = k; idx-- > 0;) {
      alpha[idx] = inv_sy_[idx] * s_[idx].dot(q);
      q -= alpha[idx] * y_[idx];
    }
    q = gamma_ * apply_minv(q);
    for (std::size_t idx = 0; idx < k; ++idx) {
      const double beta = inv_sy_[idx] * y_[idx].dot(q);
      q += (alpha[idx] - beta) * s_[idx];
    }
    return -q;
  }

 private:
  // Restriction of the preconditioner to the free subspace, so H0 maps free
  // vectors to free vectors and the secant pairs stay consistent.
  Eigen::VectorXd apply_minv(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(v.size());
    out.head(block_) = solver_.solve(v.head(block_));
    out.tail(block_) = solver_.solve(v.tail(block_));
    out.array() *= free_mask_;
    return out;
  }

  static constexpr std::size_t kHistory = 10;
  Eigen::Index block_;
  Eigen::ArrayXd free_mask_;
  Eigen::SimplicialLDLT<SparseMat> solver_;
  std::deque<Eigen::VectorXd> s_, y_;
  std::deque<double> inv_sy_;
  double gamma_ = 1.0;
};

}  // namespace

MinimizeResult minimize(const LogPolarGrid& grid, const TargetDomain& t,
                        const MinimizeOptions& opts) {
  if (opts.max_iter < 1)
    throw std::invalid_argument("minimize: max_iter must be at least 1");
  if (!(opts.grad_tol > 0.0))
    throw std::invalid_argument("minimize: grad_tol must be positive");

  const Eigen::Index n = grid.n_s * grid.n_theta;
  const double rstar = t.base.r_outer;
  const Objective obj(grid, t.shear);

  // Box bounds on rho; psi is unconstrained. The boundary rows are attached
  // to the target's boundary circles through degenerate intervals.
  Eigen::VectorXd lo =
      Eigen::VectorXd::Constant(2 * n, -std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi =
      Eigen::VectorXd::Constant(2 * n, std::numeric_limits<double>::infinity());
  {
    auto lo_rho = Eigen::Map<Eigen::ArrayXXd>(lo.data(), grid.n_s, grid.n_theta);
    auto hi_rho = Eigen::Map<Eigen::ArrayXXd>(hi.data(), grid.n_s, grid.n_theta);
    lo_rho.setOnes();
    hi_rho.setConstant(rstar);
    hi_rho.row(0).setOnes();                      // inner boundary on |w| = 1
    lo_rho.row(grid.n_s - 1).setConstant(rstar);  // outer boundary on |w| = R*
  }
  const auto project = [&](Eigen::VectorXd& x) { x = x.cwiseMax(lo).cwiseMin(hi); };
  const auto recenter = [&](Eigen::VectorXd& x) {
    if (t.shear != 0.0) return;  // psi shifts are energy-neutral only for round targets
    auto psi = Eigen::Map<Eigen::ArrayXXd>(x.data() + n, grid.n_s, grid.n_theta);
    psi -= psi.row(0).mean();
  };

  // The boundary rows never move (lo == hi); their gradient components are
  // boundary reactions, not descent information. Strip them from every
  // gradient so the curvature pairs live entirely in the free subspace;
  // otherwise the two-loop recursion leaks reaction terms through the
  // preconditioner into the search direction.
  Eigen::ArrayXd free_mask = Eigen::ArrayXd::Ones(2 * n);
  for (Eigen::Index k = 0; k < 2 * n; ++k)
    if (lo[k] == hi[k]) free_mask[k] = 0.0;
  const auto strip = [&](Eigen::VectorXd& g) { g.array() *= free_mask; };

  const auto projected_gradient = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
    Eigen::VectorXd pg = g;
    for (Eigen::Index k = 0; k < 2 * n; ++k)
      if ((x[k] <= lo[k] && g[k] > 0.0) || (x[k] >= hi[k] && g[k] < 0.0)) pg[k] = 0.0;
    return pg;
  };

  // Pack the power-stretch initial state.
  Eigen::VectorXd x(2 * n);
  {
    const PolarMapState st0 = initial_state(grid, t);
    Eigen::Map<Eigen::ArrayXXd>(x.data(), grid.n_s, grid.n_theta) = st0.rho;
    Eigen::Map<Eigen::ArrayXXd>(x.data() + n, grid.n_s, grid.n_theta) = st0.psi;
  }
  project(x);

  MinimizeResult res;
  Eigen::VectorXd g;
  double energy = obj.energy_and_gradient(x, g);
  strip(g);
  res.energy_trace.push_back(energy);

  LbfgsMemory mem(SparseMat(obj.stiffness() + obj.mass()), n, free_mask);
  if (!mem.ok()) {
    res.diagnostic = "minimize: preconditioner factorization failed";
    res.grad_norm = projected_gradient(x, g).norm();
    res.state = initial_state(grid, t);
    res.field = state_field(res.state);
    res.energy = dirichlet(res.field);
    return res;
  }
  bool restarted = false;
  int iter = 0;
  int no_progress = 0;
  double best_grad = std::numeric_limits<double>::infinity();
  double best_energy = std::numeric_limits<double>::infinity();
  constexpr double armijo = 1e-4;

  while (true) {
    const Eigen::VectorXd pg = projected_gradient(x, g);
    res.grad_norm = pg.norm();
    if (res.grad_norm <= opts.grad_tol * (1.0 + energy)) {
      res.converged = true;
      break;
    }
    if (iter >= opts.max_iter) break;
    const bool grad_progress = res.grad_norm < 0.999 * best_grad;
    const bool energy_progress = energy < best_energy - 1e-12 * (1.0 + std::abs(energy));
    best_grad = std::min(best_grad, res.grad_norm);
    best_energy = std::min(best_energy, energy);
    if (grad_progress || energy_progress) {
      no_progress = 0;
    } else if (++no_progress > 40) {
      res.diagnostic = "minimize: no descent progress over 40 iterations";
      break;
    }

    Eigen::VectorXd d = mem.direction(pg);
    for (Eigen::Index k = 0; k < 2 * n; ++k)
      if (lo[k] == hi[k] || (x[k] <= lo[k] && g[k] > 0.0) ||
          (x[k] >= hi[k] && g[k] < 0.0))
        d[k] = 0.0;
    bool d_is_raw_gradient = false;
    if (g.dot(d) > -1e-14 * res.grad_norm * d.norm()) {  // enforce descent
      d = -pg;
      d_is_raw_gradient = true;
    }

    // Once the model decrease falls below the floating-point resolution of
    // the total energy, the Armijo test has no signal left; the remaining
    // descent (typically the last decades of the gradient norm) is
    // certified through the gradient instead.
    const bool energy_floor =
        std::abs(g.dot(d)) <= 1e-11 * (1.0 + std::abs(energy));

    Eigen::VectorXd x_next, g_next;
    double e_next = 0.0;
    bool accepted = false;
    if (!energy_floor) {
      // Armijo backtracking along the projection arc.
      double step = 1.0;
      bool nan_seen = false;
      for (int halvings = 0; halvings < 60; ++halvings) {
        x_next = x + step * d;
        project(x_next);
        const double e_trial = obj.energy(x_next);
        if (std::isnan(e_trial)) {
          nan_seen = true;
          break;
        }
        const double decrease = g.dot(x_next - x);
        if (e_trial <= energy + armijo * decrease && decrease < 0.0) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (nan_seen) {
        res.diagnostic = "minimize: NaN encountered in line search";
        break;
      }
      if (accepted) {
        // Gauge re-centering is energy-neutral in exact arithmetic; if
        // roundoff from the shift would break trace monotonicity, keep the
        // raw accepted point.
        const Eigen::VectorXd x_raw = x_next;
        recenter(x_next);
        e_next = obj.energy_and_gradient(x_next, g_next);
        if (!(e_next <= energy)) {
          x_next = x_raw;
          e_next = obj.energy_and_gradient(x_next, g_next);
        }
        strip(g_next);
      }
    } else {
      // Backtrack on strict decrease of the projected gradient norm, at an
      // energy no worse than roundoff. Along the quasi-Newton direction the
      // Euclidean gradient norm may grow for every step length (the
      // directional derivative of |g|^2 is -2 g^T Hess H g, indefinite when
      // Hess and H do not commute), so on failure fall back to the raw
      // projected gradient, along which -2 pg^T Hess pg < 0 guarantees a
      // short enough step shrinks the norm.
      for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
        if (attempt == 1) {
          if (d_is_raw_gradient) break;
          d = -pg;
        }
        double step = 1.0;
        for (int halvings = 0; halvings < 40; ++halvings) {
          x_next = x + step * d;
          project(x_next);
          e_next = obj.energy_and_gradient(x_next, g_next);
          strip(g_next);
          if (std::isfinite(e_next) &&
              e_next <= energy + 1e-12 * (1.0 + std::abs(energy)) &&
              projected_gradient(x_next, g_next).norm() < res.grad_norm) {
            accepted = true;
            break;
          }
          step *= 0.5;
        }
      }
      e_next = std::min(e_next, energy);  // trace stays non-increasing
    }

    if (!accepted) {
      if (!restarted && !mem.empty()) {
        // stale curvature can stall the search near the active set; retry
        // once from a preconditioned steepest-descent restart
        mem.clear();
        restarted = true;
        continue;
      }
      res.diagnostic = "minimize: line search could not reduce the energy";
      break;
    }
    restarted = false;

    mem.push(x_next - x, g_next - g);
    x = std::move(x_next);
    g = std::move(g_next);
    energy = e_next;
    res.energy_trace.push_back(energy);
    ++iter;
  }

  res.iterations = iter;
  res.state = PolarMapState{
      grid, Eigen::Map<const Eigen::ArrayXXd>(x.data(), grid.n_s, grid.n_theta),
      Eigen::Map<const Eigen::ArrayXXd>(x.data() + n, grid.n_s, grid.n_theta), t};
  res.field = state_field(res.state);
  res.energy = dirichlet(res.field);
  const ComplexField phi = hopf_field(res.field);
  if (t.shear == 0.0)
    res.hopf = fit_constant(phi, grid.tau, modulus(t.base));
  else
    res.hopf = fit_constant(phi);
  return res;
}

std::vector<CurvePoint> energy_curve(const std::vector<double>& tau_list,
                                     const TargetDomain& t, Eigen::Index n_s,
                                     Eigen::Index n_theta, const MinimizeOptions& opts,
                                     int jobs) {
  if (tau_list.empty())
    throw std::invalid_argument("energy_curve: tau list must be nonempty");
  for (std::size_t k = 1; k < tau_list.size(); ++k)
    if (!(tau_list[k] > tau_list[k - 1]))
      throw std::invalid_argument("energy_curve: tau list must be strictly increasing");

  std::vector<CurvePoint> points(tau_list.size());
  const auto run_point = [&](std::size_t k) {
    const LogPolarGrid grid = build_grid(tau_list[k], n_s, n_theta);
    const MinimizeResult r = minimize(grid, t, opts);
    points[k] = CurvePoint{tau_list[k], r.energy, r.hopf, r.converged, r.iterations};
  };

  const int workers = std::clamp<int>(jobs, 1, static_cast<int>(tau_list.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < tau_list.size(); ++k) run_point(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < tau_list.size(); k = next.fetch_add(1))
          run_point(k);
      });
    for (auto& th : pool) th.join();
  }
  return points;
}

std::pair<double, double> power_stretch_transform_check(const PolarMapState& st,
                                                        double alpha) {
  if (!(alpha > 0.0))
    throw std::domain_error("power_stretch_transform_check: alpha must be positive");
  // Same nodal values reinterpreted on the companion grid realize the
  // resampling s -> s/alpha exactly (uniform grids, equal node counts).
  const LogPolarGrid companion =
      build_grid(alpha * st.grid.tau, st.grid.n_s, st.grid.n_theta);
  const PolarMapState resampled{companion, st.rho, st.psi, st.target};

  const EnergyBreakdown original = energy_of_state(st);
  const EnergyBreakdown transformed = energy_of_state(resampled);

  double normal_defect = 0.0;
  if (original.normal > 1e-30 || transformed.normal > 1e-30)
    normal_defect = original.normal / transformed.normal - alpha;
  const double tangential_defect =
      original.tangential / transformed.tangential - 1.0 / alpha;
  return {normal_defect, tangential_defect};
}

}  // namespace annulus
