#pragma once

#include <iosfwd>
#include "json.hpp"
#include <optional>
#include <string>
#include <vector>

#include "hyperkin/core.hpp"
#include "hyperkin/states.hpp"

namespace hyperkin::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kInvalidInput = 2,
  kNumericalFailure = 3,
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string command;  // energies | scaling | propagate | verify
  StateFamily family = StateFamily::U0;
  std::optional<int> d;
  std::optional<std::string> n;  // single N, or a range for scaling
  std::string quantity = "energy";
  double beta_kappa = 1.0;
  double kappa = 1.0;
  std::size_t n_points = 4096;
  std::optional<double> r_max;   // outer wall, units of 1/kappa
  std::optional<double> dt;      // units of hbar/epsilon
  std::optional<std::size_t> n_steps;
  bool refine = false;
  std::string output;            // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  int jobs = 0;
  std::optional<std::string> only;
  double perturb_norm = 0.0;     // test-only fault injection for verify

  PhysicalParams params() const;

  /// D from --D or 3N from --N. Exactly one must be present.
  HyperDimension dimension() const;
};

/// Reads a RunConfig from a JSON object whose keys mirror the fields
/// ("command", "family", "D", "N", "beta_kappa", ...).
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

/// Named presets reproducing each headline result.
std::optional<RunConfig> recipe(const std::string& name);
std::optional<nlohmann::json> recipe_json(const std::string& name);
std::vector<std::string> recipe_names();

int cmd_energies(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_scaling(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_propagate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Names accepted by `verify --only`.
std::vector<std::string> verification_checks();

/// Runs the oracle-equivalence suite. `only` restricts to one check;
/// `perturb_norm` scales every norm constant by (1 + perturb_norm).
std::vector<CheckResult> run_verification(const std::optional<std::string>& only,
                                          double perturb_norm = 0.0);

/// Largest |g' + g^2 - (2M/hbar^2) V_2| / (|g'| + g^2 + |(2M/hbar^2) V_2|) with g = (log u)',
/// over log-spaced r in [r_lo, r_hi]; derivatives are five-point finite differences.
double eigenstate_residual(const PhysicalParams& params, double r_lo, double r_hi,
                           int samples = 400);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperkin::cli
