#pragma once

#include <string_view>

#include "hyperkin/core.hpp"
#include "hyperkin/states.hpp"

namespace hyperkin {

/// Quantum centrifugal potential (hbar^2/2M) (D-1)(D-3) / (4 r^2).
/// Repulsive for D >= 4, zero for D = 1, 3, attractive for D = 2.
double v_q(HyperDimension dim, const PhysicalParams& params, double r);

enum class EnergyMethod { ClosedForm, Quadrature };

std::string_view to_string(EnergyMethod m);

/// Kinetic energy split T = T_r + T_V. All energies are in units of epsilon.
struct EnergyReport {
  double t_r = 0.0;
  double t_v = 0.0;
  double total = 0.0;
  EnergyMethod method = EnergyMethod::ClosedForm;
  StateFamily family = StateFamily::U0;
  HyperDimension dim{1};
  double epsilon = 0.0;  // physical value of the unit
  bool divergent = false;  // <r^-2> does not exist; t_v and total are infinite
};

// Closed forms, in units of epsilon. U0 rejects D <= 2 (the 1/(D-2) terms).
double t_r_closed(StateFamily family, HyperDimension dim, const PhysicalParams& params);
double t_v_closed(StateFamily family, HyperDimension dim, const PhysicalParams& params);

/// Para-radial energy  int u (-hbar^2/2M) u'' dr  by quadrature, units of epsilon.
double t_r_quadrature(const RadialState& state, const Tolerance& tol = {});

/// Centrifugal energy  int V_Q |u|^2 dr  by quadrature, units of epsilon.
/// Throws DivergenceError when <r^-2> does not exist for the state.
double t_v_quadrature(const RadialState& state, const Tolerance& tol = {});

EnergyReport energy_report(const RadialState& state, EnergyMethod method,
                           const Tolerance& tol = {});

}  // namespace hyperkin
