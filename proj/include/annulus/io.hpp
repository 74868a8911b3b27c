#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "annulus/domain.hpp"
#include "annulus/grid.hpp"
#include "annulus/minimize.hpp"

namespace annulus {

using Json = nlohmann::ordered_json;

/// Shortest text with 17 significant digits that parses back to exactly the
/// same double; negative zero is normalized to "0". Non-finite values print
/// as "inf"/"-inf"/"nan" (valid in CSV cells only).
std::string format_float(double v);

/// Deterministic JSON serialization: object keys in insertion order, floats
/// through format_float, 2-space indentation. parse(json_to_string(j)) and
/// re-serialization are byte-identical, which makes written reports
/// round-trip stable. Throws std::invalid_argument on non-finite numbers.
std::string json_to_string(const Json& j);

/// CSV dump of a field: header `s,theta,re,im`, row-major with θ fastest.
std::string field_csv(const ComplexField& f);

/// CSV table of an energy sweep: columns
/// tau,total,normal,tangential,jacobian_integral,hopf_c,hopf_residual,converged,iterations
/// plus a final oracle_energy column (closed-form minimum) when t.shear = 0.
std::string curve_csv(const std::vector<CurvePoint>& points, const TargetDomain& t);

/// Run configuration as carried in reports.
struct RunParams {
  double tau = 1.0;
  double rstar = 2.0;
  double delta = 0.0;
  Eigen::Index ns = 96;
  Eigen::Index ntheta = 192;
  double grad_tol = 1e-8;
  int max_iter = 5000;
};

Json params_json(const RunParams& p);
RunParams params_from_json(const Json& j);

/// Full JSON report of a minimize run: config, energy breakdown, Hopf fit,
/// convergence data, and bound checks (area lower bound, modulus-ratio upper
/// bound, rectifiable-boundary bound). The target modulus entering the upper
/// bound is log(rstar) for round targets and the capacity value on a fixed
/// 64 x 128 grid otherwise.
Json minimize_report(const RunParams& p, const MinimizeResult& r);

/// Closed-form oracle bundle for a (tau, rstar) pair: thresholds, branch,
/// lambda, energy, slope, curvature, Hopf constant, and the analytic bounds.
Json oracle_report(double tau, double rstar);

/// Parses `a:b:n` into n equally spaced inclusive points (a plain number is
/// a single point). Throws std::invalid_argument on malformed input, n < 1,
/// or b <= a when n > 1.
std::vector<double> parse_range(const std::string& text);

}  // namespace annulus
