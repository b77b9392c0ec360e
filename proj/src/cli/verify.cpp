#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperkin/cli.hpp"
#include "hyperkin/dynamics.hpp"
#include "hyperkin/energy.hpp"
#include "hyperkin/quadrature.hpp"
#include "hyperkin/specialfn.hpp"

namespace hyperkin::cli {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Case {
  StateFamily family;
  int d;
  double bk;
};

std::vector<Case> state_cases(std::initializer_list<int> dims) {
  std::vector<Case> cases;
  for (int d : dims) {
    cases.push_back({StateFamily::U0, d, 1.0});
    cases.push_back({StateFamily::U1, d, 1.0});
    for (double bk : {0.25, 1.0, 4.0}) cases.push_back({StateFamily::U2, d, bk});
  }
  return cases;
}

std::string label(const Case& c) {
  std::ostringstream s;
  s << to_string(c.family) << " D=" << c.d;
  if (c.family == StateFamily::U2) s << " bk=" << c.bk;
  return s.str();
}

CheckResult check_normalization(double perturb) {
  CheckResult r{"normalization", true, 0.0, 1e-9, {}};
  const double scale = (1.0 + perturb) * (1.0 + perturb);
  for (const auto& c : state_cases({4, 6, 9, 30, 60})) {
    const RadialState s(c.family, HyperDimension(c.d), PhysicalParams::natural(c.bk));
    const auto sup = s.support();
    const auto q = quadrature::integrate_radial(
        [&](double x) { return std::exp(2.0 * s.log_u(x)); }, sup.r_min, sup.r_max,
        Tolerance{1e-12, 1e-14, 15});
    const double dev = std::abs(q.value * scale - 1.0);
    if (dev > r.observed) {
      r.observed = dev;
      r.detail = "worst " + label(c);
    }
  }
  r.pass = r.observed <= r.threshold;
  return r;
}

CheckResult check_energies() {
  CheckResult r{"energies", true, 0.0, 1e-8, {}};
  for (const auto& c : state_cases({4, 5, 6, 9, 12, 30, 60, 150})) {
    const RadialState s(c.family, HyperDimension(c.d), PhysicalParams::natural(c.bk));
    const double dr = rel(t_r_quadrature(s), t_r_closed(c.family, s.dim(), s.params()));
    const double dv = rel(t_v_quadrature(s), t_v_closed(c.family, s.dim(), s.params()));
    const double dev = std::max(dr, dv);
    if (dev > r.observed) {
      r.observed = dev;
      r.detail = "worst " + label(c);
    }
  }
  r.pass = r.observed <= r.threshold;
  return r;
}

CheckResult check_slopes() {
  CheckResult r{"slopes", true, 0.0, 1e-8, {}};
  for (const auto& c : state_cases({4, 6, 9, 30, 60})) {
    const RadialState s(c.family, HyperDimension(c.d), PhysicalParams::natural(c.bk));
    const double dev = rel(raman_nath_slope(s), raman_nath_slope_closed(s));
    if (dev > r.observed) {
      r.observed = dev;
      r.detail = "worst " + label(c);
    }
  }
  r.pass = r.observed <= r.threshold;
  return r;
}

CheckResult check_eigenstate() {
  CheckResult r{"eigenstate", true, 0.0, 1e-8, "u2 with V2, r in [0.1, 10]/kappa, relative to the local terms"};
  for (double bk : {0.25, 1.0, 4.0}) {
    const auto p = PhysicalParams::natural(bk);
    r.observed = std::max(r.observed, eigenstate_residual(p, 0.1, 10.0));
  }
  r.pass = r.observed <= r.threshold;
  return r;
}

CheckResult check_bessel() {
  CheckResult r{"bessel", true, 0.0, 1e-9, "recurrence and integral representation"};
  for (double z : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 50.0}) {
    const double k0 = specialfn::bessel_k(0, z);
    const double k1 = specialfn::bessel_k(1, z);
    const double k2 = specialfn::bessel_k(2, z);
    r.observed = std::max(r.observed, std::abs(k2 - k0 - 2.0 / z * k1) / k2);
    for (int n = 0; n <= 2; ++n) {
      // K_n(z) = int_0^inf cosh(n s) exp(-z cosh s) ds, the r = e^s form of the defining integral.
      const double upper = std::acosh(1.0 + 40.0 / z) + 1.0;
      const auto q = quadrature::integrate(
          [&](double s) { return std::cosh(n * s) * std::exp(-z * (std::cosh(s) - 1.0)); }, 0.0,
          upper, Tolerance{1e-13, 1e-300, 15});
      r.observed = std::max(r.observed, rel(specialfn::bessel_k_scaled(n, z), q.value));
    }
  }
  r.pass = r.observed <= r.threshold;
  return r;
}

CheckResult check_gamma() {
  CheckResult r{"gamma", true, 0.0, 1e-11, "Gamma(x+1) = x Gamma(x) on [0.5, 50]"};
  for (double x = 0.5; x <= 50.0; x += 0.25) {
    r.observed = std::max(r.observed,
                          rel(specialfn::gamma(x + 1.0), x * specialfn::gamma(x)));
  }
  r.pass = r.observed <= r.threshold;
  return r;
}

CheckResult check_sign() {
  CheckResult r{"sign", true, 0.0, 0.0, "V_Q sign structure, D in 1..3000"};
  const PhysicalParams p;
  int violations = 0;
  for (int d = 1; d <= 3000; ++d) {
    for (double lr = -3.0; lr <= 3.0; lr += 0.5) {
      const double v = v_q(HyperDimension(d), p, std::pow(10.0, lr));
      const bool ok = (d == 2) ? v < 0.0 : (d == 1 || d == 3) ? v == 0.0 : v > 0.0;
      if (!ok) ++violations;
    }
  }
  r.observed = violations;
  r.pass = violations == 0;
  return r;
}

}  // namespace

double eigenstate_residual(const PhysicalParams& params, double r_lo, double r_hi, int samples) {
  const RadialState s(StateFamily::U2, HyperDimension(3), params);
  const double c = 2.0 * params.mass / (params.hbar * params.hbar);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (samples - 1));
    // Five-point differences of log u, which varies on the scale r even where u itself
    // changes by orders of magnitude; u''/u = (log u)'' + ((log u)')^2.
    const double h = 2e-3 * r;
    const double m2 = s.log_u(r - 2 * h), m1 = s.log_u(r - h), z = s.log_u(r);
    const double p1 = s.log_u(r + h), p2 = s.log_u(r + 2 * h);
    const double g = (m2 - 8 * m1 + 8 * p1 - p2) / (12.0 * h);
    const double dg = (-m2 + 16 * m1 - 30 * z + 16 * p1 - p2) / (12.0 * h * h);
    const double pot = c * eigen_potential_v2(params, r);
    const double scale = std::abs(dg) + g * g + std::abs(pot);
    worst = std::max(worst, std::abs(dg + g * g - pot) / scale);
  }
  return worst;
}

std::vector<std::string> verification_checks() {
  return {"normalization", "energies", "slopes", "eigenstate", "bessel", "gamma", "sign"};
}

std::vector<CheckResult> run_verification(const std::optional<std::string>& only,
                                          double perturb_norm) {
  if (only) {
    const auto names = verification_checks();
    if (std::find(names.begin(), names.end(), *only) == names.end()) {
      throw PreconditionError("unknown check '" + *only + "'");
    }
  }
  std::vector<CheckResult> out;
  auto want = [&](const char* name) { return !only || *only == name; };
  if (want("normalization")) out.push_back(check_normalization(perturb_norm));
  if (want("energies")) out.push_back(check_energies());
  if (want("slopes")) out.push_back(check_slopes());
  if (want("eigenstate")) out.push_back(check_eigenstate());
  if (want("bessel")) out.push_back(check_bessel());
  if (want("gamma")) out.push_back(check_gamma());
  if (want("sign")) out.push_back(check_sign());
  return out;
}

}  // namespace hyperkin::cli
