#pragma once

#include "json.hpp"
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperkin/core.hpp"
#include "hyperkin/states.hpp"

namespace hyperkin {

/// Ordinary least squares of log y against log x.
struct PowerLawFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double log_prefactor = 0.0;
  std::size_t points = 0;
};

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// N fermions filling the lowest N levels of a 1D trap of frequency Omega.
struct FermionEnergy {
  double summed;  // hbar Omega * sum_{j<N} (j + 1/2)
  double closed;  // N^2 hbar Omega / 2
};

FermionEnergy fermion_trap_energy(int n, const PhysicalParams& params);

enum class ScalingQuantity { Energy, Slope, Fermion };

std::string_view to_string(ScalingQuantity q);
ScalingQuantity parse_quantity(std::string_view name);

struct ScalingRow {
  int n = 0;
  int d = 0;  // always 3n
  double value = 0.0;
  std::string units;
};

struct ScalingTable {
  ScalingQuantity quantity = ScalingQuantity::Energy;
  std::optional<StateFamily> family;
  double beta_kappa = 1.0;
  std::vector<ScalingRow> rows;
  double fit_exponent = 0.0;
  double fit_error = 0.0;
};

/// Total closed-form kinetic energy (units of epsilon) for D = 3N. Requires N >= 2.
/// Rows are computed in parallel on up to `jobs` threads (0 = OpenMP default).
ScalingTable energy_scaling_table(StateFamily family, std::span<const int> n_values,
                                  const PhysicalParams& params, int jobs = 0);

/// Analytic Raman-Nath slope (units of epsilon*kappa) for D = 3N. Requires N >= 2.
ScalingTable slope_scaling_table(StateFamily family, std::span<const int> n_values,
                                 const PhysicalParams& params, int jobs = 0);

/// Fermion trap energy in units of hbar*Omega.
ScalingTable fermion_scaling_table(std::span<const int> n_values, const PhysicalParams& params);

/// CSV with header "N,D,value,units".
std::string to_csv(const ScalingTable& table);
nlohmann::json to_json(const ScalingTable& table);

/// "a:b" (inclusive, step 1), "a:b:step", or "a,b,c".
std::vector<int> parse_n_values(std::string_view spec);

}  // namespace hyperkin
