#include "hyperkin/states.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hyperkin/specialfn.hpp"

namespace hyperkin {

std::string_view to_string(StateFamily f) {
  switch (f) {
    case StateFamily::U0:
      return "u0";
    case StateFamily::U1:
      return "u1";
    case StateFamily::U2:
      return "u2";
  }
  return "?";
}

StateFamily parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "u0") return StateFamily::U0;
  if (lower == "u1") return StateFamily::U1;
  if (lower == "u2") return StateFamily::U2;
  throw PreconditionError("unknown state family '" + std::string(name) +
                          "' (expected u0, u1 or u2)");
}

double log_solid_angle(HyperDimension dim) {
  const double half_d = 0.5 * dim.value();
  return std::log(2.0) + half_d * std::log(std::numbers::pi) - specialfn::log_gamma(half_d);
}

double solid_angle(HyperDimension dim) { return std::exp(log_solid_angle(dim)); }

double unit_sphere_volume(HyperDimension dim) {
  return std::exp(log_solid_angle(dim) - std::log(static_cast<double>(dim.value())));
}

RadialState::RadialState(StateFamily family, HyperDimension dim, PhysicalParams params)
    : family_(family), dim_(dim), params_(params) {
  params_.validate();
  const double d = dim_.value();
  const double ln_kappa = std::log(params_.kappa);
  switch (family_) {
    case StateFamily::U0:
      power_ = 0.5 * (d - 1.0);
      log_norm_ = 0.5 * (std::log(2.0) - specialfn::log_gamma(0.5 * d)) + 0.5 * d * ln_kappa;
      break;
    case StateFamily::U1:
      power_ = 0.5 * (d + 3.0);
      log_norm_ = 0.5 * (std::log(2.0) - specialfn::log_gamma(0.5 * d + 2.0)) +
                  (0.5 * d + 2.0) * ln_kappa;
      break;
    case StateFamily::U2: {
      const double bk = params_.beta_kappa();
      log_norm_ = -0.25 * std::log(bk) +
                  0.5 * (ln_kappa - std::log(2.0) -
                         specialfn::log_bessel_k(1, 2.0 * std::sqrt(bk)));
      break;
    }
  }
}

double RadialState::norm_constant() const { return std::exp(log_norm_); }

namespace {

void require_positive_r(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("radius must be positive and finite, got " + std::to_string(r));
  }
}

}  // namespace

double RadialState::log_u(double r) const {
  require_positive_r(r);
  if (family_ == StateFamily::U2) {
    return log_norm_ - 0.5 * (params_.beta / r + params_.kappa * r);
  }
  const double k2 = params_.kappa * params_.kappa;
  return log_norm_ + power_ * std::log(r) - 0.5 * k2 * r * r;
}

double RadialState::u(double r) const { return std::exp(log_u(r)); }

// u'/u and its first two derivatives, per family.
namespace {

struct LogDerivs {
  double g;    // u'/u
  double g1;   // d/dr of g
  double g2;   // d^2/dr^2 of g
};

LogDerivs log_derivs(StateFamily family, double power, const PhysicalParams& p,
                            double r) {
  if (family == StateFamily::U2) {
    const double b = p.beta;
    return {0.5 * (b / (r * r) - p.kappa), -b / (r * r * r), 3.0 * b / (r * r * r * r)};
  }
  const double k2 = p.kappa * p.kappa;
  return {power / r - k2 * r, -power / (r * r) - k2, 2.0 * power / (r * r * r)};
}

}  // namespace

double RadialState::du_dr(double r) const {
  const double value = u(r);
  return value * log_derivs(family_, power_, params_, r).g;
}

double RadialState::curvature_ratio(double r) const {
  require_positive_r(r);
  const auto d = log_derivs(family_, power_, params_, r);
  return d.g * d.g + d.g1;
}

double RadialState::curvature_ratio_derivative(double r) const {
  require_positive_r(r);
  const auto d = log_derivs(family_, power_, params_, r);
  return 2.0 * d.g * d.g1 + d.g2;
}

double RadialState::d2u_dr2(double r) const { return u(r) * curvature_ratio(r); }

double RadialState::log_psi(double r) const {
  return log_u(r) - 0.5 * log_solid_angle(dim_) - 0.5 * (dim_.value() - 1.0) * std::log(r);
}

double RadialState::psi(double r) const { return std::exp(log_psi(r)); }

double RadialState::small_r_power() const noexcept {
  if (family_ == StateFamily::U2) return std::numeric_limits<double>::infinity();
  return 2.0 * power_;
}

double RadialState::peak_radius() const {
  if (family_ == StateFamily::U2) return std::sqrt(params_.beta / params_.kappa);
  return std::sqrt(power_) / params_.kappa;
}

RadialSupport RadialState::support(double tail_mass) const { return weighted_support(0.0, tail_mass); }

RadialSupport RadialState::weighted_support(double k, double tail_mass) const {
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) {
    throw PreconditionError("support: tail mass must lie in (0, 1)");
  }
  const double half_tail = 0.5 * tail_mass;
  if (family_ == StateFamily::U2) {
    // In s = r / sqrt(beta/kappa) the density is exp(-c (s + 1/s)) with c = sqrt(beta kappa)
    // and total mass 2 K_1(2c). Both tails are bounded by exp(-c S) / c.
    const double c = std::sqrt(params_.beta_kappa());
    const double log_z = std::log(2.0) + specialfn::log_bessel_k(1, 2.0 * c);
    const double s_hi = std::max(2.0, -(std::log(half_tail) + log_z + std::log(c)) / c);
    const double scale = std::sqrt(params_.beta / params_.kappa);
    // r^{-k} only grows polynomially where exp(-c/s) is already negligible.
    const double s_lo = k > 0.0 ? 2.0 * s_hi : s_hi;
    return {scale / s_lo, scale * s_hi};
  }
  // kappa^2 r^2 is Gamma-distributed with shape power + 1/2 - k/2.
  const double shape = std::max(power_ + 0.5 - 0.5 * k, 0.25);
  const double x_lo = boost::math::gamma_p_inv(shape, half_tail);
  const double x_hi = boost::math::gamma_q_inv(shape, half_tail);
  const double lo = std::max(std::sqrt(x_lo), std::numeric_limits<double>::min());
  return {lo / params_.kappa, std::sqrt(x_hi) / params_.kappa};
}

RadialSupport RadialState::amplitude_support(double fraction) const {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw PreconditionError("amplitude_support: fraction must lie in (0, 1)");
  }
  const double peak = peak_radius();
  const double target = std::log(fraction);
  const double ref = peak > 0.0 ? log_u(peak) : log_u(std::numeric_limits<double>::min());
  auto below = [&](double r) { return log_u(r) - ref < target; };

  auto bisect = [&](double inside, double outside) {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (inside + outside);
      if (below(mid)) {
        outside = mid;
      } else {
        inside = mid;
      }
      if (std::abs(outside - inside) <= 1e-14 * std::max(1.0, outside)) break;
    }
    return outside;
  };

  const double start = peak > 0.0 ? peak : 1.0 / params_.kappa;
  double hi = start * 2.0;
  while (!below(hi)) hi *= 2.0;
  const double r_hi = bisect(peak > 0.0 ? peak : 0.0, hi);

  double r_lo = 0.0;
  if (peak > 0.0) {
    double lo = 0.5 * peak;
    while (lo > 1e-300 && !below(lo)) lo *= 0.5;
    r_lo = lo > 1e-300 ? bisect(peak, lo) : 0.0;
  }
  return {r_lo, r_hi};
}

double eval_u(const RadialState& state, double r) { return state.u(r); }

double eval_psi(const RadialState& state, double r) { return state.psi(r); }

double norm_constant(StateFamily family, HyperDimension dim, const PhysicalParams& params) {
  return RadialState(family, dim, params).norm_constant();
}

double eigen_potential_v2(const PhysicalParams& params, double r) {
  params.validate();
  require_positive_r(r);
  const double b = params.beta;
  const double k = params.kappa;
  const double r2 = r * r;
  return params.kinetic_prefactor() *
         (0.25 * b * b / (r2 * r2) - 0.5 * b * k / r2 - b / (r2 * r) + 0.25 * k * k);
}

nlohmann::json state_to_json(const RadialState& state) {
  return {{"family", std::string(to_string(state.family()))},
          {"D", state.dim().value()},
          {"kappa", state.params().kappa},
          {"beta_kappa", state.params().beta_kappa()}};
}

RadialState state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw PreconditionError("state config must be a JSON object");
  }
  try {
    const auto family = parse_family(j.at("family").get<std::string>());
    const int d = j.at("D").get<int>();
    PhysicalParams p;
    p.kappa = j.value("kappa", 1.0);
    const double bk = j.value("beta_kappa", 1.0);
    p.beta = bk / p.kappa;
    return RadialState(family, HyperDimension(d), p);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("bad state config: ") + e.what());
  }
}

}  // namespace hyperkin
