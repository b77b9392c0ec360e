#include <algorithm>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "hyperkin/cli.hpp"

namespace hyperkin::cli {

namespace {

// Raw flag values; only the ones actually given on the command line are applied.
struct Flags {
  std::string family;
  int d = 0;
  std::string n;
  std::string quantity;
  double beta_kappa = 0.0;
  double kappa = 0.0;
  std::size_t n_points = 0;
  double r_max = 0.0;
  double dt = 0.0;
  std::size_t n_steps = 0;
  bool refine = false;
  std::string output;
  std::string format;
  int jobs = 0;
  std::string only;
  double perturb_norm = 0.0;
};

void add_state_flags(CLI::App& sub, Flags& f) {
  sub.add_option("--family", f.family, "Radial state: u0, u1 or u2");
  sub.add_option("--D", f.d, "Hyperspherical dimension");
  sub.add_option("--N", f.n, "Particle count (D = 3N)");
  sub.add_option("--beta-kappa", f.beta_kappa, "Dimensionless beta*kappa for u2");
  sub.add_option("--kappa", f.kappa, "Inverse length scale kappa");
}

void add_output_flags(CLI::App& sub, Flags& f) {
  sub.add_option("-o,--output", f.output, "Write the artifact to this file");
  sub.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

bool given(const CLI::App& sub, const std::string& name) {
  const auto* opt = sub.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

void apply_flags(const CLI::App& sub, const Flags& f, RunConfig& c) {
  if (given(sub, "--family")) c.family = parse_family(f.family);
  if (given(sub, "--D")) {
    c.d = f.d;
    if (!given(sub, "--N")) c.n.reset();
  }
  if (given(sub, "--N")) {
    c.n = f.n;
    if (!given(sub, "--D")) c.d.reset();
  }
  if (given(sub, "--quantity")) c.quantity = f.quantity;
  if (given(sub, "--beta-kappa")) c.beta_kappa = f.beta_kappa;
  if (given(sub, "--kappa")) c.kappa = f.kappa;
  if (given(sub, "--n-points")) c.n_points = f.n_points;
  if (given(sub, "--r-max")) c.r_max = f.r_max;
  if (given(sub, "--dt")) c.dt = f.dt;
  if (given(sub, "--n-steps")) c.n_steps = f.n_steps;
  if (given(sub, "--refine")) c.refine = f.refine;
  if (given(sub, "--output")) c.output = f.output;
  if (given(sub, "--format")) c.format = f.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  if (given(sub, "--jobs")) c.jobs = f.jobs;
  if (given(sub, "--only")) c.only = f.only;
  if (given(sub, "--perturb-norm")) c.perturb_norm = f.perturb_norm;
}

nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// Later layers override earlier ones; giving D or N replaces the other.
void merge_layer(nlohmann::json& merged, const nlohmann::json& layer) {
  if (layer.contains("D") && !layer.contains("N")) merged.erase("N");
  if (layer.contains("N") && !layer.contains("D")) merged.erase("D");
  merged.merge_patch(layer);
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "energies") return cmd_energies(c, out, err);
  if (c.command == "scaling") return cmd_scaling(c, out, err);
  if (c.command == "propagate") return cmd_propagate(c, out, err);
  if (c.command == "verify") return cmd_verify(c, out, err);
  throw PreconditionError("no command given (expected energies, scaling, propagate or verify)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinetic energy and free expansion of hyperspherical s-states", "hyperkin"};
  std::string config_path;
  std::string recipe_name;
  bool list = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--recipe", recipe_name, "Named preset (see --list-recipes)");
  app.add_flag("--list-recipes", list, "List the named presets and exit");
  app.require_subcommand(0, 1);

  Flags f;
  auto* energies = app.add_subcommand("energies", "Closed-form and quadrature kinetic energies");
  add_state_flags(*energies, f);
  add_output_flags(*energies, f);

  auto* scaling = app.add_subcommand("scaling", "Energy or slope versus particle number");
  add_state_flags(*scaling, f);
  scaling->add_option("--quantity", f.quantity, "energy, slope or fermion");
  scaling->add_option("--jobs", f.jobs, "Worker threads (0: OpenMP default)");
  add_output_flags(*scaling, f);

  auto* propagate = app.add_subcommand("propagate", "Crank-Nicolson free expansion");
  add_state_flags(*propagate, f);
  propagate->add_option("--n-points", f.n_points, "Interior grid points");
  propagate->add_option("--r-max", f.r_max, "Outer wall in units of 1/kappa");
  propagate->add_option("--dt", f.dt, "Time step in units of hbar/epsilon");
  propagate->add_option("--n-steps", f.n_steps, "Number of steps");
  propagate->add_flag("--refine", f.refine, "Also compare against a refined grid");
  add_output_flags(*propagate, f);

  auto* verify = app.add_subcommand("verify", "Oracle-equivalence checks");
  verify->add_option("--only", f.only, "Run a single check");
  verify->add_option("--perturb-norm", f.perturb_norm, "Fault injection for testing")
      ->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidInput;
  }

  try {
    if (list) {
      for (const auto& name : recipe_names()) out << name << "\n";
      return kSuccess;
    }

    nlohmann::json merged = nlohmann::json::object();
    if (!config_path.empty()) {
      const auto file = read_config_file(config_path);
      if (!file.is_object()) throw PreconditionError("config must be a JSON object");
      merge_layer(merged, file);
    }
    if (!recipe_name.empty()) {
      const auto r = recipe_json(recipe_name);
      if (!r) throw PreconditionError("unknown recipe '" + recipe_name + "'");
      merge_layer(merged, *r);
    }
    RunConfig config = config_from_json(merged);

    for (auto* sub : app.get_subcommands()) {
      if (!config.command.empty() && config.command != sub->get_name()) {
        throw PreconditionError("command '" + sub->get_name() + "' conflicts with configured '" +
                                config.command + "'");
      }
      config.command = sub->get_name();
      apply_flags(*sub, f, config);
    }
    return dispatch(config, out, err);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    if (!e.diagnostics().empty()) err << e.diagnostics() << "\n";
    return kNumericalFailure;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace hyperkin::cli
