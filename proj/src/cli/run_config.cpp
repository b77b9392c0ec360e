#include <map>

#include "hyperkin/cli.hpp"
#include "hyperkin/scaling.hpp"

namespace hyperkin::cli {

PhysicalParams RunConfig::params() const {
  PhysicalParams p;
  p.kappa = kappa;
  p.beta = beta_kappa / kappa;
  p.validate();
  return p;
}

HyperDimension RunConfig::dimension() const {
  if (d && n) throw PreconditionError("give exactly one of --D and --N, not both");
  if (d) return HyperDimension(*d);
  if (n) {
    const auto values = parse_n_values(*n);
    if (values.size() != 1) {
      throw PreconditionError("this command takes a single N, got '" + *n + "'");
    }
    return HyperDimension::from_particles(values.front());
  }
  throw PreconditionError("one of --D or --N is required");
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw PreconditionError("config must be a JSON object");
  RunConfig c;
  try {
    c.command = j.value("command", std::string{});
    if (j.contains("family")) c.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("D")) c.d = j.at("D").get<int>();
    if (j.contains("N")) {
      const auto& n = j.at("N");
      c.n = n.is_string() ? n.get<std::string>() : std::to_string(n.get<int>());
    }
    c.quantity = j.value("quantity", c.quantity);
    c.beta_kappa = j.value("beta_kappa", c.beta_kappa);
    c.kappa = j.value("kappa", c.kappa);
    c.n_points = j.value("n_points", c.n_points);
    if (j.contains("r_max")) c.r_max = j.at("r_max").get<double>();
    if (j.contains("dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("n_steps")) c.n_steps = j.at("n_steps").get<std::size_t>();
    c.refine = j.value("refine", c.refine);
    c.output = j.value("output", c.output);
    const auto fmt = j.value("format", std::string("csv"));
    if (fmt == "csv") {
      c.format = OutputFormat::Csv;
    } else if (fmt == "json") {
      c.format = OutputFormat::Json;
    } else {
      throw PreconditionError("format must be csv or json");
    }
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("only")) c.only = j.at("only").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("bad config: ") + e.what());
  }
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j = {{"command", c.command},
                      {"family", std::string(to_string(c.family))},
                      {"quantity", c.quantity},
                      {"beta_kappa", c.beta_kappa},
                      {"kappa", c.kappa},
                      {"n_points", c.n_points},
                      {"refine", c.refine},
                      {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
                      {"jobs", c.jobs}};
  if (c.d) j["D"] = *c.d;
  if (c.n) j["N"] = *c.n;
  if (c.r_max) j["r_max"] = *c.r_max;
  if (c.dt) j["dt"] = *c.dt;
  if (c.n_steps) j["n_steps"] = *c.n_steps;
  if (!c.output.empty()) j["output"] = c.output;
  if (c.only) j["only"] = *c.only;
  return j;
}

namespace {

const std::map<std::string, nlohmann::json>& recipe_table() {
  static const std::map<std::string, nlohmann::json> table = {
      {"thermo-linear", {{"command", "scaling"}, {"quantity", "energy"}, {"family", "u0"},
                         {"N", "2:50"}}},
      {"tv-quadratic", {{"command", "scaling"}, {"quantity", "energy"}, {"family", "u2"},
                        {"N", "10:100"}, {"beta_kappa", 1.0}}},
      {"sqrt-slope", {{"command", "scaling"}, {"quantity", "slope"}, {"family", "u0"},
                      {"N", "20:200"}}},
      {"n2-explosion", {{"command", "scaling"}, {"quantity", "slope"}, {"family", "u2"},
                        {"N", "20:200"}, {"beta_kappa", 1.0}}},
      {"fermion-n2", {{"command", "scaling"}, {"quantity", "fermion"}, {"N", "1:100"}}},
      {"energies-u2", {{"command", "energies"}, {"family", "u2"}, {"N", 10},
                       {"beta_kappa", 1.0}}},
      {"ehrenfest-u0", {{"command", "propagate"}, {"family", "u0"}, {"D", 6}}},
      {"ehrenfest-u1", {{"command", "propagate"}, {"family", "u1"}, {"D", 9}}},
      {"ehrenfest-u2", {{"command", "propagate"}, {"family", "u2"}, {"D", 30},
                        {"beta_kappa", 1.0}}},
      {"verify-all", {{"command", "verify"}}},
  };
  return table;
}

}  // namespace

std::optional<nlohmann::json> recipe_json(const std::string& name) {
  const auto& table = recipe_table();
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::optional<RunConfig> recipe(const std::string& name) {
  const auto j = recipe_json(name);
  if (!j) return std::nullopt;
  return config_from_json(*j);
}

std::vector<std::string> recipe_names() {
  std::vector<std::string> names;
  for (const auto& [name, cfg] : recipe_table()) names.push_back(name);
  return names;
}

}  // namespace hyperkin::cli
