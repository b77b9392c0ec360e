#include "hyperkin/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace hyperkin::quadrature {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::TanhSinh:
      return "tanh-sinh";
    case Method::GaussKronrod:
      return "gauss-kronrod";
  }
  return "?";
}

namespace {

bool accepted(const Result& r, const Tolerance& tol) {
  return std::isfinite(r.value) &&
         r.error_estimate <= std::max(tol.abs, tol.rel * r.l1_norm);
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, const Tolerance& tol) {
  tol.validate();
  if (!(a < b)) {
    throw PreconditionError("integrate: empty or reversed interval");
  }

  Result ts;
  ts.method = Method::TanhSinh;
  std::string tanh_sinh_failure;
  try {
    boost::math::quadrature::tanh_sinh<double> rule(tol.max_subdivisions);
    ts.value = rule.integrate(f, a, b, tol.rel, &ts.error_estimate, &ts.l1_norm);
    ts.converged = accepted(ts, tol);
    if (ts.converged) return ts;
  } catch (const std::exception& e) {
    tanh_sinh_failure = e.what();
  }

  Result gk;
  gk.method = Method::GaussKronrod;
  try {
    // Bisection depth is capped: on a non-integrable integrand the adaptive
    // recursion grows exponentially with depth before giving up.
    const unsigned depth = static_cast<unsigned>(std::min(4 * tol.max_subdivisions, 30));
    gk.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, depth, tol.rel, &gk.error_estimate, &gk.l1_norm);
    gk.converged = accepted(gk, tol);
    if (gk.converged) return gk;
  } catch (const std::exception& e) {
    std::ostringstream diag;
    diag << "tanh-sinh: " << (tanh_sinh_failure.empty() ? "not converged" : tanh_sinh_failure)
         << "; gauss-kronrod: " << e.what();
    throw NumericalError("quadrature failed on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]",
                         diag.str());
  }

  std::ostringstream diag;
  diag.precision(3);
  diag << "tanh-sinh value=" << ts.value << " err=" << ts.error_estimate
       << " | gauss-kronrod value=" << gk.value << " err=" << gk.error_estimate
       << " | L1=" << gk.l1_norm << " rel_tol=" << tol.rel;
  throw NumericalError("quadrature did not reach tolerance", diag.str());
}

Result integrate_radial(const Integrand& f, double r_min, double r_max, const Tolerance& tol) {
  if (!(r_min > 0.0) || !(r_max > r_min)) {
    throw PreconditionError("integrate_radial: need 0 < r_min < r_max");
  }
  auto g = [&f](double s) {
    const double r = std::exp(s);
    return f(r) * r;
  };
  return integrate(g, std::log(r_min), std::log(r_max), tol);
}

}  // namespace hyperkin::quadrature
