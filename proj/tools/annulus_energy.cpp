// Command-line harness: minimization runs, curve sweeps, closed-form oracle
// evaluation, capacity modulus, and the property verification battery.
//
// Exit codes: 0 ok, 1 usage error, 2 non-convergence, 3 verification failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annulus/closedform.hpp"
#include "annulus/domain.hpp"
#include "annulus/energy.hpp"
#include "annulus/grid.hpp"
#include "annulus/harmonic.hpp"
#include "annulus/hopf.hpp"
#include "annulus/io.hpp"
#include "annulus/minimize.hpp"

namespace {

using namespace annulus;

constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void validate_grid(Eigen::Index ns, Eigen::Index ntheta) {
  require(ns >= 4, "ns must be at least 4");
  require(ntheta >= 8 && ntheta % 2 == 0, "ntheta must be even and at least 8");
}

void validate_target(double rstar, double delta) {
  require(rstar > 1.0, "rstar must exceed 1");
  require(delta >= 0.0 && delta < 1.0, "delta must lie in [0, 1)");
}

void write_output(const std::string& path, const std::string& content) {
  std::string body = content;
  if (body.empty() || body.back() != '\n') body += '\n';
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << body;
}

Json curve_json(const std::vector<CurvePoint>& points, const TargetDomain& t) {
  Json rows = Json::array();
  for (const CurvePoint& p : points) {
    Json row;
    row["tau"] = p.tau;
    Json energy;
    energy["total"] = p.energy.total;
    energy["normal"] = p.energy.normal;
    energy["tangential"] = p.energy.tangential;
    energy["jacobian_integral"] = p.energy.jacobian_integral;
    row["energy"] = energy;
    Json hopf;
    hopf["c"] = p.hopf.c;
    hopf["residual"] = p.hopf.residual;
    hopf["sign_consistent"] = p.hopf.sign_consistent;
    row["hopf"] = hopf;
    row["converged"] = p.converged;
    row["iterations"] = p.iterations;
    if (t.shear == 0.0)
      row["oracle_energy"] = min_energy_annulus(p.tau, t.base.r_outer);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// verify: property battery at desk-scale resolution
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

bool selected(const std::string& name, const std::string& only) {
  return only.empty() || name.find(only) != std::string::npos;
}

Check check_oracle_identity() {
  Check c{"oracle-identity", true, ""};
  double worst = 0.0;
  for (int a = 0; a < 10 && c.pass; ++a) {
    const double rstar = 1.1 + 0.35 * a;
    const double rmax = rstar + std::sqrt(rstar * rstar - 1.0);
    for (int b = 1; b <= 10; ++b) {
      const double r = 1.0 + (rmax - 1.0) * b / 11.0;
      const double lhs = 8.0 * kPi * nitsche_hopf_c(nitsche_lambda(r, rstar));
      const double rhs = -energy_slope(r, rstar);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  if (worst > 1e-12) c.pass = false;
  if (upsilon_lambda(1.0) != 0.0) c.pass = false;
  double prev = 0.0;
  for (int k = 0; k < 50 && c.pass; ++k) {
    const double tau = std::exp(std::log(0.05) + (std::log(100.0) - std::log(0.05)) * k / 49.0);
    const double u = upsilon(tau);
    if (u < prev) c.pass = false;
    prev = u;
  }
  const double tau_c = critical_tau(2.0);
  const double jump = std::abs(min_energy_annulus(tau_c, 2.0) -
                               (2.0 * kPi * 0.0 + nitsche_energy(std::exp(tau_c), 1.0)));
  const double slope_gap = std::abs(energy_slope(std::exp(tau_c), 2.0) - 2.0 * kPi);
  if (jump > 1e-9 || slope_gap > 1e-9) c.pass = false;
  c.detail = "hopf/slope defect " + format_float(worst) + ", transition gap " +
             format_float(std::max(jump, slope_gap));
  return c;
}

Check check_bounds(const MinimizeResult& run, double tau) {
  Check c{"bounds", true, ""};
  const TargetDomain& t = run.state.target;
  const double lower = energy_lower_bound(t);
  const double upper = upper_energy_bound(tau, modulus(t.base), area(t));
  const double appendix =
      appendix_energy_bound(boundary_gap(t), 2.0, 2.0 * std::exp(tau));
  const double e = run.energy.total;
  c.pass = run.converged && e >= lower * (1.0 - 5e-3) && e <= upper * (1.0 + 5e-3) &&
           e > appendix;
  c.detail = "E " + format_float(e) + " in [" + format_float(lower) + ", " +
             format_float(upper) + "], floor " + format_float(appendix);
  return c;
}

Check check_hopf_sign(const MinimizeResult& low, const MinimizeResult& high) {
  Check c{"hopf-sign", true, ""};
  c.pass = low.converged && high.converged && low.hopf.c > 0.0 && high.hopf.c < 0.0 &&
           low.hopf.sign_consistent && high.hopf.sign_consistent &&
           low.hopf.residual < 1e-2 && high.hopf.residual < 1e-2;
  c.detail = "c(0.5) " + format_float(low.hopf.c) + ", c(1.0) " +
             format_float(high.hopf.c) + ", residuals " +
             format_float(low.hopf.residual) + "/" + format_float(high.hopf.residual);
  return c;
}

Check check_reich_walczak(const MinimizeResult& run, double tau) {
  Check c{"reich-walczak", true, ""};
  const ModulusBoundsCheck mb = reich_walczak_check(run.field, run.state.target, tau);
  c.pass = run.converged && mb.normal_ok && mb.tangential_ok;
  c.detail = "K_N integral " + format_float(mb.kn_integral) + " vs " +
             format_float(mb.normal_bound) + ", K_T integral " +
             format_float(mb.kt_integral) + " vs " + format_float(mb.tangential_bound);
  return c;
}

Check check_power_stretch(Eigen::Index ns, Eigen::Index ntheta) {
  Check c{"power-stretch", true, ""};
  const double rstar = 2.0;
  const LogPolarGrid grid = build_grid(std::log(rstar), ns, ntheta);
  const TargetDomain t = make_target(rstar, 0.0);
  const PolarMapState conformal = initial_state(grid, t);
  double worst = 0.0;
  for (const double alpha : {0.5, 2.0}) {
    const auto [dn, dt] = power_stretch_transform_check(conformal, alpha);
    worst = std::max({worst, std::abs(dn) / alpha, std::abs(dt) * alpha});
  }
  c.pass = worst <= 5e-3;
  c.detail = "worst relative defect " + format_float(worst);
  return c;
}

Check check_poisson(Eigen::Index ns, Eigen::Index ntheta) {
  Check c{"poisson", true, ""};
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const LogPolarGrid grid = build_grid(1.0, ns, ntheta);
  double worst_increase = -std::numeric_limits<double>::infinity();
  double worst_idem = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<Eigen::Index> row_pick(1, grid.n_s - 2);
    Eigen::Index r0 = row_pick(rng), r1 = row_pick(rng);
    if (r0 > r1) std::swap(r0, r1);
    std::uniform_int_distribution<Eigen::Index> col_pick(0, grid.n_theta - 1);
    const Eigen::Index c0 = col_pick(rng);
    const Eigen::Index width = col_pick(rng) + 1;
    RegionMask mask{Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
        grid.n_s, grid.n_theta, false)};
    for (Eigen::Index i = r0; i <= r1; ++i)
      for (Eigen::Index w = 0; w < width; ++w)
        mask.inside(i, (c0 + w) % grid.n_theta) = true;

    ComplexField f{grid, Eigen::ArrayXXcd(grid.n_s, grid.n_theta)};
    for (Eigen::Index i = 0; i < grid.n_s; ++i)
      for (Eigen::Index j = 0; j < grid.n_theta; ++j)
        f.values(i, j) = Complex(unit(rng), unit(rng));

    const ComplexField once = poisson_modify(f, mask);
    const ComplexField twice = poisson_modify(once, mask);
    // Dirichlet's principle is exact in the energy form matched to the
    // solve stencil; wider-stencil energies can tick up on few-node masks.
    const double e0 = five_point_energy(f);
    const double e1 = five_point_energy(once);
    worst_increase = std::max(worst_increase, (e1 - e0) / std::max(1.0, e0));
    worst_idem =
        std::max(worst_idem, (twice.values - once.values).abs().maxCoeff());
  }
  c.pass = worst_increase <= 1e-10 && worst_idem <= 1e-7;
  c.detail = "worst relative energy increase " + format_float(worst_increase) +
             ", idempotence gap " + format_float(worst_idem);
  return c;
}

Check check_capacity(Eigen::Index ns, Eigen::Index ntheta) {
  Check c{"capacity", true, ""};
  const double m1 = capacity_modulus(make_target(2.0, 0.0), ns, ntheta);
  const double m2 = capacity_modulus(make_target(std::exp(1.0), 0.0), ns, ntheta);
  const double m3 = capacity_modulus(make_target(2.0, 0.2), ns, ntheta);
  const double log2 = std::log(2.0);
  c.pass = std::abs(m1 - log2) <= 1e-3 * log2 && std::abs(m2 - 1.0) <= 1e-3 &&
           m3 >= log2 / 1.5 && m3 <= 1.5 * log2;
  c.detail = "round " + format_float(m1) + "/" + format_float(m2) + ", sheared " +
             format_float(m3);
  return c;
}

int cmd_verify(Eigen::Index ns, Eigen::Index ntheta, const std::string& only) {
  std::vector<Check> checks;
  const TargetDomain t2 = make_target(2.0, 0.0);
  const auto run_tau = [&](double tau) {
    return minimize(build_grid(tau, ns, ntheta), t2, MinimizeOptions{});
  };

  if (selected("oracle-identity", only)) checks.push_back(check_oracle_identity());
  if (selected("bounds", only)) {
    const MinimizeResult r = run_tau(0.9);
    checks.push_back(check_bounds(r, 0.9));
  }
  if (selected("hopf-sign", only))
    checks.push_back(check_hopf_sign(run_tau(0.5), run_tau(1.0)));
  if (selected("reich-walczak", only)) {
    const MinimizeResult r = run_tau(1.0);
    checks.push_back(check_reich_walczak(r, 1.0));
  }
  if (selected("power-stretch", only)) checks.push_back(check_power_stretch(ns, ntheta));
  if (selected("poisson", only)) checks.push_back(check_poisson(ns, ntheta));
  if (selected("capacity", only)) checks.push_back(check_capacity(ns, ntheta));

  if (checks.empty()) {
    std::cerr << "verify: no check matches --only filter '" << only << "'\n";
    return 1;
  }
  std::string failed;
  for (const Check& c : checks) {
    std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.name;
    for (std::size_t k = c.name.size(); k < 16; ++k) std::cout << ' ';
    std::cout << c.detail << '\n';
    if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
  }
  if (!failed.empty()) {
    std::cerr << "verification failed: " << failed << '\n';
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  // Reserved for future randomized features; currently nothing is randomized
  // beyond fixed-seed verification draws.
  [[maybe_unused]] const char* seed_env = std::getenv("ANNULUS_ENERGY_SEED");

  CLI::App app{
      "annulus-energy: energy-minimal mappings between doubly connected "
      "planar domains"};
  app.require_subcommand(1);

  RunParams p;
  std::string tau_text = "1.0";
  std::string out_path;
  std::string format = "json";
  std::string curve_format = "csv";
  std::string only;
  int jobs = 1;

  CLI::App* c_min = app.add_subcommand("minimize", "Minimize the energy for one tau");
  c_min->add_option("--tau", p.tau, "Source annulus modulus (log outer radius)");
  c_min->add_option("--rstar", p.rstar, "Target outer radius (inner radius is 1)");
  c_min->add_option("--delta", p.delta, "Target shear in [0,1)");
  c_min->add_option("--ns", p.ns, "Grid nodes along s");
  c_min->add_option("--ntheta", p.ntheta, "Grid nodes along theta (even)");
  c_min->add_option("--grad-tol", p.grad_tol, "Projected-gradient tolerance");
  c_min->add_option("--max-iter", p.max_iter, "Iteration cap");
  c_min->add_option("--out", out_path, "Output file (default stdout)");
  c_min->add_option("--format", format, "json (report) or csv (field dump)");

  CLI::App* c_curve = app.add_subcommand("curve", "Energy sweep over a tau range");
  c_curve->add_option("--tau", tau_text, "Range a:b:n (n inclusive points) or single value");
  c_curve->add_option("--rstar", p.rstar, "Target outer radius");
  c_curve->add_option("--delta", p.delta, "Target shear in [0,1)");
  c_curve->add_option("--ns", p.ns, "Grid nodes along s");
  c_curve->add_option("--ntheta", p.ntheta, "Grid nodes along theta (even)");
  c_curve->add_option("--grad-tol", p.grad_tol, "Projected-gradient tolerance");
  c_curve->add_option("--max-iter", p.max_iter, "Iteration cap");
  c_curve->add_option("--jobs", jobs, "Concurrent minimize runs");
  c_curve->add_option("--out", out_path, "Output file (default stdout)");
  c_curve->add_option("--format", curve_format, "csv (default) or json");

  CLI::App* c_oracle = app.add_subcommand("oracle", "Closed-form values for (tau, rstar)");
  c_oracle->add_option("--tau", p.tau, "Source annulus modulus");
  c_oracle->add_option("--rstar", p.rstar, "Target outer radius");
  c_oracle->add_option("--out", out_path, "Output file (default stdout)");

  CLI::App* c_mod = app.add_subcommand("modulus", "Capacity modulus of the target");
  double mod_rstar = 2.0, mod_delta = 0.0;
  Eigen::Index mod_ns = 64, mod_ntheta = 128;
  c_mod->add_option("--rstar", mod_rstar, "Target outer radius");
  c_mod->add_option("--delta", mod_delta, "Target shear in [0,1)");
  c_mod->add_option("--ns", mod_ns, "Capacity grid nodes along s");
  c_mod->add_option("--ntheta", mod_ntheta, "Capacity grid nodes along theta");
  c_mod->add_option("--out", out_path, "Output file (default stdout)");

  CLI::App* c_verify = app.add_subcommand("verify", "Run the property battery");
  Eigen::Index ver_ns = 64, ver_ntheta = 128;
  c_verify->add_option("--ns", ver_ns, "Verification grid nodes along s");
  c_verify->add_option("--ntheta", ver_ntheta, "Verification grid nodes along theta");
  c_verify->add_option("--only", only, "Run only checks whose name contains this text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (c_min->parsed()) {
      require(p.tau > 0.0, "tau must be positive");
      validate_target(p.rstar, p.delta);
      validate_grid(p.ns, p.ntheta);
      require(p.grad_tol > 0.0, "grad-tol must be positive");
      require(p.max_iter >= 1, "max-iter must be at least 1");
      require(format == "json" || format == "csv", "format must be json or csv");
      const TargetDomain t = make_target(p.rstar, p.delta);
      const MinimizeResult r = minimize(build_grid(p.tau, p.ns, p.ntheta), t,
                                        MinimizeOptions{p.max_iter, p.grad_tol});
      write_output(out_path,
                   format == "json" ? json_to_string(minimize_report(p, r))
                                    : field_csv(r.field));
      if (!r.diagnostic.empty()) std::cerr << r.diagnostic << '\n';
      return r.converged ? 0 : 2;
    }
    if (c_curve->parsed()) {
      const std::vector<double> taus = parse_range(tau_text);
      for (const double tau : taus) require(tau > 0.0, "tau must be positive");
      validate_target(p.rstar, p.delta);
      validate_grid(p.ns, p.ntheta);
      require(p.grad_tol > 0.0, "grad-tol must be positive");
      require(p.max_iter >= 1, "max-iter must be at least 1");
      require(jobs >= 1, "jobs must be at least 1");
      require(curve_format == "json" || curve_format == "csv",
              "format must be json or csv");
      const TargetDomain t = make_target(p.rstar, p.delta);
      const std::vector<CurvePoint> points = energy_curve(
          taus, t, p.ns, p.ntheta, MinimizeOptions{p.max_iter, p.grad_tol}, jobs);
      write_output(out_path, curve_format == "csv"
                                 ? curve_csv(points, t)
                                 : json_to_string(curve_json(points, t)));
      for (const CurvePoint& pt : points)
        if (!pt.converged) {
          std::cerr << "curve: non-converged point at tau = " << format_float(pt.tau)
                    << '\n';
          return 2;
        }
      return 0;
    }
    if (c_oracle->parsed()) {
      require(p.tau > 0.0, "tau must be positive");
      require(p.rstar > 1.0, "rstar must exceed 1");
      write_output(out_path, json_to_string(oracle_report(p.tau, p.rstar)));
      return 0;
    }
    if (c_mod->parsed()) {
      validate_target(mod_rstar, mod_delta);
      validate_grid(mod_ns, mod_ntheta);
      const double value = capacity_modulus(
          make_target(mod_rstar, mod_delta), mod_ns, mod_ntheta);
      Json j;
      j["rstar"] = mod_rstar;
      j["delta"] = mod_delta;
      j["ns"] = static_cast<std::int64_t>(mod_ns);
      j["ntheta"] = static_cast<std::int64_t>(mod_ntheta);
      j["modulus"] = value;
      write_output(out_path, json_to_string(j));
      return 0;
    }
    if (c_verify->parsed()) {
      validate_grid(ver_ns, ver_ntheta);
      return cmd_verify(ver_ns, ver_ntheta, only);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "annulus-energy: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "annulus-energy: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "annulus-energy: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
