#pragma once

#include <string>
#include <utility>
#include <vector>

#include "annulus/domain.hpp"
#include "annulus/energy.hpp"
#include "annulus/grid.hpp"
#include "annulus/hopf.hpp"

namespace annulus {

///
/// Candidate maps are parametrized in target polar coordinates:
/// f = phi_delta(rho * e^{i Theta}) with Theta = theta + psi. The closure
/// constraint becomes the box 1 <= rho <= R*, winding 1 is structural, and
/// collapse onto a boundary circle is representable exactly. The boundary
/// rows are attached to the target's boundary circles (rho = 1 on row 0,
/// rho = R* on row n_s-1, realized as degenerate box intervals) while psi
/// stays free everywhere: the tangential boundary values are the free
/// boundary unknowns.
///
struct PolarMapState {
  LogPolarGrid grid;
  Eigen::ArrayXXd rho;  ///< n_s x n_theta, in [1, R*]
  Eigen::ArrayXXd psi;  ///< n_s x n_theta angular perturbation, gauge: mean over row 0 is 0
  TargetDomain target;
};

struct MinimizeOptions {
  int max_iter = 5000;
  double grad_tol = 1e-8;  ///< converged when |proj grad| <= grad_tol*(1+energy)
};

struct MinimizeResult {
  PolarMapState state;
  ComplexField field;      ///< phi_delta(rho e^{i Theta})
  EnergyBreakdown energy;
  HopfFit hopf;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;            ///< projected-gradient norm at exit
  std::string diagnostic;            ///< non-empty on abnormal termination
  std::vector<double> energy_trace;  ///< per-iteration energies, non-increasing
};

/// One row of an energy sweep.
struct CurvePoint {
  double tau = 0.0;
  EnergyBreakdown energy;
  HopfFit hopf;
  bool converged = false;
  int iterations = 0;
};

/// Power-stretch initial guess rho = exp(alpha*s) with alpha = log(R*)/tau,
/// clamped to the box; psi = 0.
PolarMapState initial_state(const LogPolarGrid& grid, const TargetDomain& t);

/// The complex field phi_delta(rho * e^{i(theta+psi)}) of a state.
ComplexField state_field(const PolarMapState& st);

/// Energy of the state's field (single canonical path: build the field,
/// evaluate dirichlet).
EnergyBreakdown energy_of_state(const PolarMapState& st);

/// Projected limited-memory quasi-Newton descent over (rho, psi): box
/// projection of rho each iteration, gauge re-centering of psi for round
/// targets, Armijo backtracking line search, monotone energy trace.
/// Non-convergence is reported through converged=false, never an exception;
/// NaN encountered in the line search aborts with a diagnostic message.
MinimizeResult minimize(const LogPolarGrid& grid, const TargetDomain& t,
                        const MinimizeOptions& opts = {});

/// Independent minimize runs, one per tau (strictly increasing list), each
/// on a fresh n_s x n_theta grid; rows ordered by tau. jobs > 1 runs points
/// concurrently (each run is single-threaded and deterministic).
std::vector<CurvePoint> energy_curve(const std::vector<double>& tau_list,
                                     const TargetDomain& t, Eigen::Index n_s,
                                     Eigen::Index n_theta,
                                     const MinimizeOptions& opts = {}, int jobs = 1);

/// Resamples the state along s -> s/alpha onto a companion grid of modulus
/// alpha*tau (same node counts, so the resampling is index-aligned and
/// exact) and compares energy parts: returns (E_N ratio - alpha,
/// E_T ratio - 1/alpha) with ratio = original/transformed. When both normal
/// energies vanish (collapse states) the normal defect is reported as 0.
std::pair<double, double> power_stretch_transform_check(const PolarMapState& st,
                                                        double alpha);

}  // namespace annulus
