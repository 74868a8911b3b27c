#include "annulus/io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "annulus/closedform.hpp"
#include "annulus/harmonic.hpp"

namespace annulus {

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_json(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v))
        throw std::invalid_argument("json_to_string: non-finite number");
      out += format_float(v);
      break;
    }
    case Json::value_t::string:
      append_escaped(out, j.get<std::string>());
      break;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        out += pad_in;
        append_json(out, j[k], depth + 1);
        out += (k + 1 < j.size()) ? ",\n" : "\n";
      }
      out += pad + "]";
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out += pad_in;
        append_escaped(out, it.key());
        out += ": ";
        append_json(out, it.value(), depth + 1);
        out += (k + 1 < j.size()) ? ",\n" : "\n";
      }
      out += pad + "}";
      break;
    }
    default:
      throw std::invalid_argument("json_to_string: unsupported value type");
  }
}

}  // namespace

std::string json_to_string(const Json& j) {
  std::string out;
  append_json(out, j, 0);
  return out;
}

std::string field_csv(const ComplexField& f) {
  std::string out = "s,theta,re,im\n";
  for (Eigen::Index i = 0; i < f.grid.n_s; ++i)
    for (Eigen::Index j = 0; j < f.grid.n_theta; ++j) {
      out += format_float(f.grid.s[i]);
      out += ',';
      out += format_float(f.grid.theta[j]);
      out += ',';
      out += format_float(f.values(i, j).real());
      out += ',';
      out += format_float(f.values(i, j).imag());
      out += '\n';
    }
  return out;
}

std::string curve_csv(const std::vector<CurvePoint>& points, const TargetDomain& t) {
  const bool with_oracle = t.shear == 0.0;
  std::string out =
      "tau,total,normal,tangential,jacobian_integral,hopf_c,hopf_residual,"
      "converged,iterations";
  if (with_oracle) out += ",oracle_energy";
  out += '\n';
  for (const CurvePoint& p : points) {
    out += format_float(p.tau);
    out += ',';
    out += format_float(p.energy.total);
    out += ',';
    out += format_float(p.energy.normal);
    out += ',';
    out += format_float(p.energy.tangential);
    out += ',';
    out += format_float(p.energy.jacobian_integral);
    out += ',';
    out += format_float(p.hopf.c);
    out += ',';
    out += format_float(p.hopf.residual);
    out += ',';
    out += p.converged ? '1' : '0';
    out += ',';
    out += std::to_string(p.iterations);
    if (with_oracle) {
      out += ',';
      out += format_float(min_energy_annulus(p.tau, t.base.r_outer));
    }
    out += '\n';
  }
  return out;
}

Json params_json(const RunParams& p) {
  Json j;
  j["tau"] = p.tau;
  j["rstar"] = p.rstar;
  j["delta"] = p.delta;
  j["ns"] = static_cast<std::int64_t>(p.ns);
  j["ntheta"] = static_cast<std::int64_t>(p.ntheta);
  j["grad_tol"] = p.grad_tol;
  j["max_iter"] = p.max_iter;
  return j;
}

RunParams params_from_json(const Json& j) {
  RunParams p;
  p.tau = j.at("tau").get<double>();
  p.rstar = j.at("rstar").get<double>();
  p.delta = j.at("delta").get<double>();
  p.ns = j.at("ns").get<Eigen::Index>();
  p.ntheta = j.at("ntheta").get<Eigen::Index>();
  p.grad_tol = j.at("grad_tol").get<double>();
  p.max_iter = j.at("max_iter").get<int>();
  return p;
}

Json minimize_report(const RunParams& p, const MinimizeResult& r) {
  const TargetDomain t = r.state.target;
  const double target_area = area(t);
  const double target_modulus =
      t.shear == 0.0 ? modulus(t.base) : capacity_modulus(t, 64, 128);

  const double lower = energy_lower_bound(t);
  const double upper = upper_energy_bound(p.tau, target_modulus, target_area);
  const double appendix =
      appendix_energy_bound(boundary_gap(t), 2.0, 2.0 * std::exp(p.tau));
  const double e = r.energy.total;

  Json j;
  j["config"] = params_json(p);
  Json energy;
  energy["total"] = r.energy.total;
  energy["normal"] = r.energy.normal;
  energy["tangential"] = r.energy.tangential;
  energy["jacobian_integral"] = r.energy.jacobian_integral;
  j["energy"] = energy;
  Json hopf;
  hopf["c"] = r.hopf.c;
  hopf["residual"] = r.hopf.residual;
  hopf["sign_consistent"] = r.hopf.sign_consistent;
  j["hopf"] = hopf;
  Json conv;
  conv["converged"] = r.converged;
  conv["iterations"] = r.iterations;
  conv["grad_norm"] = r.grad_norm;
  conv["diagnostic"] = r.diagnostic;
  j["convergence"] = conv;
  Json bounds;
  bounds["target_modulus"] = target_modulus;
  bounds["lower"] = lower;
  bounds["upper"] = upper;
  bounds["rectifiable_boundary"] = appendix;
  bounds["lower_ok"] = e >= lower * (1.0 - 5e-3);
  bounds["upper_ok"] = e <= upper * (1.0 + 5e-3);
  bounds["rectifiable_boundary_ok"] = e > appendix;
  j["bounds"] = bounds;
  return j;
}

Json oracle_report(double tau, double rstar) {
  const double tau_c = critical_tau(rstar);
  const bool convex_branch = tau <= tau_c;
  const double lambda =
      convex_branch ? nitsche_lambda(std::exp(tau), rstar) : 1.0;
  const double pi = std::numbers::pi;

  Json j;
  j["tau"] = tau;
  j["rstar"] = rstar;
  j["critical_tau"] = tau_c;
  j["critical_modstar"] = critical_modstar(tau);
  j["branch"] = convex_branch ? "convex" : "affine";
  j["lambda"] = lambda;
  j["energy"] = min_energy_annulus(tau, rstar);
  j["slope"] = convex_branch ? energy_slope(std::exp(tau), rstar) : 2.0 * pi;
  j["second_derivative"] =
      convex_branch ? energy_second_derivative(std::exp(tau), rstar) : 0.0;
  j["hopf_c"] = nitsche_hopf_c(lambda);
  j["upsilon"] = upsilon(tau);
  j["lower_bound"] = 2.0 * pi * (rstar * rstar - 1.0);
  j["upper_bound"] =
      upper_energy_bound(tau, std::log(rstar), pi * (rstar * rstar - 1.0));
  j["rectifiable_boundary_bound"] =
      appendix_energy_bound(rstar - 1.0, 2.0, 2.0 * std::exp(tau));
  j["green_lower_bound"] = green_lower_bound(std::exp(tau / 2.0));
  return j;
}

std::vector<double> parse_range(const std::string& text) {
  const auto parse_double = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("range: not a number: '" + s + "'");
    }
    if (used != s.size())
      throw std::invalid_argument("range: trailing characters in '" + s + "'");
    return v;
  };

  const std::size_t c1 = text.find(':');
  if (c1 == std::string::npos) return {parse_double(text)};
  const std::size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
    throw std::invalid_argument("range: expected a:b:n, got '" + text + "'");

  const double a = parse_double(text.substr(0, c1));
  const double b = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
  const double n_raw = parse_double(text.substr(c2 + 1));
  if (!(n_raw >= 1.0) || n_raw != std::floor(n_raw))
    throw std::invalid_argument("range: point count must be a positive integer");
  const int n = static_cast<int>(n_raw);
  if (n == 1) {
    if (a != b) throw std::invalid_argument("range: single point requires a == b");
    return {a};
  }
  if (!(b > a)) throw std::invalid_argument("range: requires b > a");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  return out;
}

}  // namespace annulus
