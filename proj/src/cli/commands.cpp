#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "hyperkin/cli.hpp"
#include "hyperkin/csv.hpp"
#include "hyperkin/dynamics.hpp"
#include "hyperkin/energy.hpp"
#include "hyperkin/scaling.hpp"

namespace hyperkin::cli {

namespace {

// Writes the artifact to the configured file, or to `out` when no path is set.
void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.output, std::ios::binary);
  if (!file) throw PreconditionError("cannot open output file '" + config.output + "'");
  file << text;
}

double rel_dev(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Human-readable notes go to stdout when the artifact went to a file.
std::ostream& notes(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return config.output.empty() ? err : out;
}

}  // namespace

int cmd_energies(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const RadialState state(config.family, config.dimension(), config.params());
  const auto closed = energy_report(state, EnergyMethod::ClosedForm);
  const auto quad = energy_report(state, EnergyMethod::Quadrature);

  struct Line {
    const char* name;
    double closed;
    double quad;
  };
  const Line lines[] = {{"t_r", closed.t_r, quad.t_r},
                        {"t_v", closed.t_v, quad.t_v},
                        {"total", closed.total, quad.total}};

  std::string text;
  if (config.format == OutputFormat::Csv) {
    text = "quantity,closed_form,quadrature,rel_dev,units\n";
    for (const auto& l : lines) {
      const std::string fields[] = {l.name, csv::format_number(l.closed),
                                    csv::format_number(l.quad),
                                    csv::format_number(rel_dev(l.closed, l.quad)), "eps"};
      text += csv::row(fields);
    }
    const std::string eps_fields[] = {"epsilon", csv::format_number(closed.epsilon),
                                      csv::format_number(quad.epsilon), "0",
                                      "hbar^2*kappa^2/(2M)"};
    text += csv::row(eps_fields);
  } else {
    nlohmann::json j = {{"state", state_to_json(state)},
                        {"epsilon", closed.epsilon},
                        {"units", "eps"},
                        {"divergent", quad.divergent}};
    for (const auto& l : lines) {
      j[l.name] = {{"closed_form", l.closed},
                   {"quadrature", l.quad},
                   {"rel_dev", rel_dev(l.closed, l.quad)}};
    }
    text = j.dump(2) + "\n";
  }
  emit(config, text, out);
  if (state.dim().has_particles()) {
    notes(config, out, err) << "N = " << state.dim().particles() << ", D = "
                            << state.dim().value() << ", total = "
                            << csv::format_number(closed.total) << " eps\n";
  }
  return kSuccess;
}

int cmd_scaling(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.d) throw PreconditionError("scaling takes an N range (--N a:b), not --D");
  if (!config.n) throw PreconditionError("scaling needs --N a:b");
  const auto n_values = parse_n_values(*config.n);
  const auto quantity = parse_quantity(config.quantity);
  const auto params = config.params();

  ScalingTable table;
  switch (quantity) {
    case ScalingQuantity::Energy:
      table = energy_scaling_table(config.family, n_values, params, config.jobs);
      break;
    case ScalingQuantity::Slope:
      table = slope_scaling_table(config.family, n_values, params, config.jobs);
      break;
    case ScalingQuantity::Fermion:
      table = fermion_scaling_table(n_values, params);
      break;
  }
  emit(config, config.format == OutputFormat::Csv ? to_csv(table) : to_json(table).dump(2) + "\n",
       out);
  notes(config, out, err) << "fit exponent = " << csv::format_number(table.fit_exponent)
                          << " +/- " << csv::format_number(table.fit_error) << " over "
                          << table.rows.size() << " rows\n";
  return kSuccess;
}

int cmd_propagate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto params = config.params();
  const RadialState state(config.family, config.dimension(), params);
  const RadialGrid grid = config.r_max
                              ? RadialGrid::uniform(*config.r_max / params.kappa, config.n_points)
                              : default_grid(state, config.n_points);
  const double window = slope_fit_window(state);
  const double dt = config.dt ? *config.dt : policy_time_step(state, grid);
  const std::size_t n_steps =
      config.n_steps ? *config.n_steps : static_cast<std::size_t>(std::ceil(window / dt));

  const auto result = propagate_free(state, grid, dt, n_steps);
  const double t_end = result.times.back();
  const auto fit = fit_initial_slope(result, std::min(window, t_end));
  const double expected = result.analytic_slope + origin_slope_term(state);

  std::string text;
  if (config.format == OutputFormat::Csv) {
    text = "# units: t=hbar/epsilon, p_r_mean=hbar*kappa, norm=1\n";
    text += "t,p_r_mean,norm\n";
    for (std::size_t i = 0; i < result.times.size(); ++i) {
      const std::string fields[] = {csv::format_number(result.times[i]),
                                    csv::format_number(result.p_r_mean[i]),
                                    csv::format_number(result.norm[i])};
      text += csv::row(fields);
    }
  } else {
    nlohmann::json j = {{"units", {{"t", "hbar/epsilon"}, {"p_r_mean", "hbar*kappa"}, {"norm", "1"}}},
                        {"t", result.times},
                        {"p_r_mean", result.p_r_mean},
                        {"norm", result.norm}};
    text = j.dump() + "\n";
  }
  emit(config, text, out);

  nlohmann::json summary = {
      {"config", config_to_json(config)},
      {"state", state_to_json(state)},
      {"grid",
       {{"r_min", grid.r_min}, {"r_max", grid.r_max}, {"n_points", grid.n_points},
        {"spacing", grid.spacing}}},
      {"dt", dt},
      {"n_steps", n_steps},
      {"fit_window", fit.window},
      {"measured_slope", fit.slope},
      {"analytic_slope", result.analytic_slope},
      {"origin_term", origin_slope_term(state)},
      {"units", {{"slope", "eps*kappa"}, {"t", "hbar/epsilon"}}}};

  auto& log = notes(config, out, err);
  log << "measured slope = " << csv::format_number(fit.slope) << " eps*kappa\n";
  log << "analytic slope = " << csv::format_number(result.analytic_slope) << " eps*kappa\n";
  if (result.analytic_slope != 0.0) {
    const double ratio = fit.slope / result.analytic_slope;
    summary["ratio"] = ratio;
    log << "ratio = " << csv::format_number(ratio) << "\n";
  } else {
    log << "ratio = n/a (analytic slope is zero)";
    if (expected != 0.0) {
      log << "; origin term " << csv::format_number(expected) << " eps*kappa";
    }
    log << "\n";
  }

  if (config.refine) {
    const auto coarse = measure_tdse_slope(state, grid, dt);
    const auto fine = measure_tdse_slope(state, grid.refined(), coarse.dt / 4.0);
    const double gain = fine.rel_error > 0.0 ? coarse.rel_error / fine.rel_error : INFINITY;
    summary["refinement"] = {{"coarse_rel_error", coarse.rel_error},
                             {"fine_rel_error", fine.rel_error},
                             {"error_reduction", gain}};
    log << "refinement: error " << csv::format_number(coarse.rel_error) << " -> "
        << csv::format_number(fine.rel_error) << " (x" << csv::format_number(gain) << ")\n";
  }

  if (!config.output.empty()) {
    std::ofstream sidecar(config.output + ".json");
    if (!sidecar) throw PreconditionError("cannot write sidecar '" + config.output + ".json'");
    sidecar << summary.dump(2) << "\n";
  }
  return kSuccess;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const auto results = run_verification(config.only, config.perturb_norm);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    out << (r.pass ? "PASS " : "FAIL ") << r.name << " observed=" << csv::format_number(r.observed)
        << " threshold=" << csv::format_number(r.threshold);
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
  }
  out << (all ? "all checks passed" : "verification FAILED") << "\n";
  return all ? kSuccess : kVerificationFailure;
}

}  // namespace hyperkin::cli
