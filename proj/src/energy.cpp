#include "hyperkin/energy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hyperkin/quadrature.hpp"
#include "hyperkin/specialfn.hpp"

namespace hyperkin {

double v_q(HyperDimension dim, const PhysicalParams& params, double r) {
  if (!(r > 0.0)) {
    throw DomainError("v_q: radius must be positive");
  }
  return params.kinetic_prefactor() * static_cast<double>(dim.strength()) / (4.0 * r * r);
}

std::string_view to_string(EnergyMethod m) {
  return m == EnergyMethod::ClosedForm ? "closed_form" : "quadrature";
}

namespace {

void require_closed_form_domain(StateFamily family, HyperDimension dim) {
  if (family == StateFamily::U0 && dim.value() <= 2) {
    throw PreconditionError("closed form for u0 is singular at D = 2 (1/(D-2) term); "
                            "closed form requires D >= 3, got D = " +
                            std::to_string(dim.value()));
  }
}

}  // namespace

double t_r_closed(StateFamily family, HyperDimension dim, const PhysicalParams& params) {
  params.validate();
  require_closed_form_domain(family, dim);
  const double d = dim.value();
  switch (family) {
    case StateFamily::U0:
      return 1.0 + 1.0 / (2.0 * (d - 2.0));
    case StateFamily::U1:
      return 1.0 + 1.0 / (2.0 * (d + 2.0));
    case StateFamily::U2: {
      const double root = std::sqrt(params.beta_kappa());
      return specialfn::bessel_k_ratio(2.0 * root) / (2.0 * root);
    }
  }
  return 0.0;
}

double t_v_closed(StateFamily family, HyperDimension dim, const PhysicalParams& params) {
  params.validate();
  require_closed_form_domain(family, dim);
  const double d = dim.value();
  switch (family) {
    case StateFamily::U0:
      return 0.5 * d - 1.0 - 0.5 / (d - 2.0);
    case StateFamily::U1:
      return 0.5 * d - 3.0 + 7.5 / (d + 2.0);
    case StateFamily::U2:
      return static_cast<double>(dim.strength()) / (4.0 * params.beta_kappa());
  }
  return 0.0;
}

double t_r_quadrature(const RadialState& state, const Tolerance& tol) {
  const auto& p = state.params();
  const auto support = state.weighted_support(2.0);
  // -u u'' = -|u|^2 (u''/u); u''/u is analytic per family.
  auto integrand = [&state](double r) {
    return -std::exp(2.0 * state.log_u(r)) * state.curvature_ratio(r);
  };
  const auto res = quadrature::integrate_radial(integrand, support.r_min, support.r_max, tol);
  return res.value * p.kinetic_prefactor() / p.epsilon();
}

double t_v_quadrature(const RadialState& state, const Tolerance& tol) {
  const auto& p = state.params();
  const long long s = state.dim().strength();
  if (s == 0) return 0.0;
  // |u|^2 ~ r^p near the origin; <r^-2> needs p - 2 > -1.
  if (!(state.small_r_power() > 1.0)) {
    throw DivergenceError("<r^-2> diverges for " + std::string(to_string(state.family())) +
                              " at D = " + std::to_string(state.dim().value()),
                          "small-r behaviour |u|^2 ~ r^" +
                              std::to_string(state.small_r_power()));
  }
  const auto support = state.weighted_support(2.0);
  auto integrand = [&state](double r) { return std::exp(2.0 * state.log_u(r)) / (r * r); };
  const auto res = quadrature::integrate_radial(integrand, support.r_min, support.r_max, tol);
  return res.value * p.kinetic_prefactor() * static_cast<double>(s) / 4.0 / p.epsilon();
}

EnergyReport energy_report(const RadialState& state, EnergyMethod method, const Tolerance& tol) {
  EnergyReport rep;
  rep.method = method;
  rep.family = state.family();
  rep.dim = state.dim();
  rep.epsilon = state.params().epsilon();
  if (method == EnergyMethod::ClosedForm) {
    rep.t_r = t_r_closed(state.family(), state.dim(), state.params());
    rep.t_v = t_v_closed(state.family(), state.dim(), state.params());
  } else {
    rep.t_r = t_r_quadrature(state, tol);
    try {
      rep.t_v = t_v_quadrature(state, tol);
    } catch (const DivergenceError&) {
      rep.divergent = true;
      const double sign = state.dim().strength() < 0 ? -1.0 : 1.0;
      rep.t_v = sign * std::numeric_limits<double>::infinity();
    }
  }
  rep.total = rep.t_r + rep.t_v;
  return rep;
}

}  // namespace hyperkin
