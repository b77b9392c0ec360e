#pragma once

#include "json.hpp"
#include <string_view>

#include "hyperkin/core.hpp"

namespace hyperkin {

/// The three radial wave-function families.
///   U0: N0 r^{(D-1)/2} exp(-kappa^2 r^2 / 2)   (product of D ground-state Gaussians)
///   U1: N1 r^{(D+3)/2} exp(-kappa^2 r^2 / 2)
///   U2: N2 exp(-(beta/r + kappa r) / 2)        (same profile for every D)
enum class StateFamily { U0, U1, U2 };

std::string_view to_string(StateFamily f);

/// Accepts "u0", "u1", "u2" (case-insensitive). Throws PreconditionError otherwise.
StateFamily parse_family(std::string_view name);

/// Total solid angle S_D = 2 pi^{D/2} / Gamma(D/2).
double solid_angle(HyperDimension dim);
double log_solid_angle(HyperDimension dim);

/// Volume of the unit ball, S_D / D.
double unit_sphere_volume(HyperDimension dim);

struct RadialSupport {
  double r_min;
  double r_max;
};

class RadialState {
 public:
  RadialState(StateFamily family, HyperDimension dim, PhysicalParams params = {});

  StateFamily family() const noexcept { return family_; }
  HyperDimension dim() const noexcept { return dim_; }
  const PhysicalParams& params() const noexcept { return params_; }

  /// N0, N1 or N2. May underflow to zero for D in the thousands; the log is always finite.
  double norm_constant() const;
  double log_norm_constant() const noexcept { return log_norm_; }

  /// log u(r) (u is positive for r > 0).
  double log_u(double r) const;

  /// u(r). Throws DomainError for r <= 0.
  double u(double r) const;
  double du_dr(double r) const;
  double d2u_dr2(double r) const;

  /// u''(r) / u(r) in closed form, and its r-derivative.
  double curvature_ratio(double r) const;
  double curvature_ratio_derivative(double r) const;

  /// Psi(r) = u(r) / (sqrt(S_D) r^{(D-1)/2}).
  double psi(double r) const;
  /// log Psi(r). Psi itself leaves double range for u2 at large D and small r.
  double log_psi(double r) const;

  /// Exponent p of the small-r power law |u|^2 ~ r^p; infinite for U2.
  double small_r_power() const noexcept;

  /// Position of the maximum of u.
  double peak_radius() const;

  /// Interval holding all but < 1e-14 of the |u|^2 mass.
  RadialSupport support(double tail_mass = 1e-14) const;

  /// Same, for the weighted density |u|^2 r^{-k}. Used to cut integrals of
  /// <r^-k> where the weight pushes mass towards the origin.
  RadialSupport weighted_support(double k, double tail_mass = 1e-14) const;

  /// Smallest/largest r where u falls to `fraction` of its peak.
  RadialSupport amplitude_support(double fraction) const;

 private:
  StateFamily family_;
  HyperDimension dim_;
  PhysicalParams params_;
  double log_norm_ = 0.0;
  double power_ = 0.0;  // r-exponent of u for U0/U1
};

double eval_u(const RadialState& state, double r);
double eval_psi(const RadialState& state, double r);
double norm_constant(StateFamily family, HyperDimension dim, const PhysicalParams& params);

/// Potential for which u2 is a zero-energy eigenstate:
/// (hbar^2/2M) [beta^2/(4 r^4) - beta kappa/(2 r^2) - beta/r^3 + (kappa/2)^2].
double eigen_potential_v2(const PhysicalParams& params, double r);

/// JSON block {"family": "u0"|"u1"|"u2", "D": int, "kappa": float, "beta_kappa": float}.
nlohmann::json state_to_json(const RadialState& state);
RadialState state_from_json(const nlohmann::json& j);

}  // namespace hyperkin
