#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hyperkin/cli.hpp"

using namespace hyperkin::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& needle) {
  return s.find(needle) != std::string::npos;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "hyperkin_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double number_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST_CASE("energies") {
  const auto a = invoke({"energies", "--family", "u0", "--N", "2"});
  CHECK(a.code == kSuccess);
  CHECK(contains(a.out, "quantity,closed_form,quadrature,rel_dev,units\n"));
  CHECK(contains(a.out, "total,3,3,"));

  const auto b = invoke({"energies", "--family", "u2", "--N", "10", "--beta-kappa", "1"});
  CHECK(b.code == kSuccess);
  CHECK(contains(b.out, "t_v,195.75,195.75,"));

  const auto c = invoke({"energies", "--family", "u0", "--D", "2"});
  CHECK(c.code == kInvalidInput);
  CHECK(contains(c.err, "singular"));

  const auto j = invoke({"energies", "--family", "u1", "--D", "30", "--format", "json"});
  CHECK(j.code == kSuccess);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed.at("total").at("closed_form").get<double>() == doctest::Approx(13.25));
  CHECK(parsed.at("state").at("family") == "u1");
}

TEST_CASE("output is deterministic") {
  const auto a = invoke({"energies", "--family", "u2", "--D", "33", "--beta-kappa", "0.3"});
  const auto b = invoke({"energies", "--family", "u2", "--D", "33", "--beta-kappa", "0.3"});
  CHECK(a.out == b.out);
  const auto c = invoke({"scaling", "--quantity", "slope", "--family", "u1", "--N", "2:40"});
  const auto d = invoke({"scaling", "--quantity", "slope", "--family", "u1", "--N", "2:40",
                         "--jobs", "3"});
  CHECK(c.out == d.out);
}

TEST_CASE("invalid input maps to exit code 2") {
  CHECK(invoke({"energies", "--family", "u0"}).code == kInvalidInput);
  CHECK(invoke({"energies", "--family", "u0", "--D", "6", "--N", "2"}).code == kInvalidInput);
  CHECK(invoke({"energies", "--family", "u7", "--D", "6"}).code == kInvalidInput);
  CHECK(invoke({"energies", "--family", "u0", "--N", "2:5"}).code == kInvalidInput);
  CHECK(invoke({"energies", "--bogus"}).code == kInvalidInput);
  CHECK(invoke({"scaling", "--quantity", "mass", "--N", "2:4"}).code == kInvalidInput);
  CHECK(invoke({"scaling", "--quantity", "energy", "--N", "1:4"}).code == kInvalidInput);
  CHECK(invoke({"propagate", "--family", "u0", "--D", "6", "--n-points", "100"}).code ==
        kInvalidInput);
  CHECK(invoke({"--recipe", "nope"}).code == kInvalidInput);
  CHECK(invoke({}).code == kInvalidInput);
  CHECK(invoke({"--help"}).code == kSuccess);
}

TEST_CASE("scaling") {
  const auto a = invoke({"scaling", "--quantity", "energy", "--family", "u2", "--N", "10:100"});
  CHECK(a.code == kSuccess);
  CHECK(contains(a.out, "N,D,value,units\n10,30,"));
  CHECK(number_after(a.err, "fit exponent = ") == doctest::Approx(2.0).epsilon(0.05));

  const auto b = invoke({"scaling", "--quantity", "slope", "--family", "u0", "--N", "20:200"});
  CHECK(number_after(b.err, "fit exponent = ") == doctest::Approx(0.5).epsilon(0.03));

  const auto c = invoke({"scaling", "--quantity", "fermion", "--N", "1:100", "--format", "json"});
  CHECK(c.code == kSuccess);
  const auto j = nlohmann::json::parse(c.out);
  for (const auto& row : j.at("rows")) {
    const int n = row.at("N");
    CHECK(row.at("value").get<double>() == 0.5 * n * n);
    CHECK(row.at("units") == "hbar*Omega");
  }
  CHECK(j.at("fit").at("exponent").get<double>() == doctest::Approx(2.0));
}

TEST_CASE("propagate writes a series and a sidecar") {
  const auto path = scratch("u0_d6.csv");
  fs::remove(path);
  fs::remove(path.string() + ".json");
  const auto r = invoke({"propagate", "--family", "u0", "--D", "6", "-o", path.string()});
  CHECK(r.code == kSuccess);
  const double ratio = number_after(r.out, "ratio = ");
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);

  const auto csv = slurp(path);
  CHECK(csv.rfind("# units:", 0) == 0);
  CHECK(contains(csv, "\nt,p_r_mean,norm\n0,0,1\n"));
  const auto side = nlohmann::json::parse(slurp(path.string() + ".json"));
  CHECK(side.at("config").at("family") == "u0");
  CHECK(side.at("grid").at("n_points") == 4096);
  CHECK(side.at("ratio").get<double>() == doctest::Approx(ratio).epsilon(1e-9));
}

TEST_CASE("propagate u2 at D = 30") {
  const auto path = scratch("u2_d30.csv");
  const auto r = invoke({"propagate", "--family", "u2", "--D", "30", "--beta-kappa", "1", "-o",
                         path.string()});
  CHECK(r.code == kSuccess);
  const double ratio = number_after(r.out, "ratio = ");
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);
}

TEST_CASE("propagate u0 at D = 3 reports the origin term") {
  const auto path = scratch("u0_d3.csv");
  const auto r = invoke({"propagate", "--family", "u0", "--D", "3", "-o", path.string()});
  CHECK(r.code == kSuccess);
  CHECK(number_after(r.out, "analytic slope = ") == 0.0);
  CHECK(contains(r.out, "ratio = n/a"));
  const double measured = number_after(r.out, "measured slope = ");
  const double origin = number_after(r.out, "origin term ");
  CHECK(std::abs(measured / origin - 1.0) < 0.01);
}

TEST_CASE("numerical failures map to exit code 3") {
  const auto path = scratch("reflect.csv");
  const auto r = invoke({"propagate", "--family", "u1", "--D", "9", "--r-max", "12", "--n-points",
                         "1024", "--dt", "1e-3", "--n-steps", "10000", "-o", path.string()});
  CHECK(r.code == kNumericalFailure);
  CHECK(contains(r.err, "reflection"));
}

TEST_CASE("verify") {
  const auto ok = invoke({"verify"});
  CHECK(ok.code == kSuccess);
  CHECK(contains(ok.out, "all checks passed"));
  CHECK_FALSE(contains(ok.out, "FAIL"));

  const auto bad = invoke({"verify", "--perturb-norm", "1e-3"});
  CHECK(bad.code == kVerificationFailure);
  CHECK(contains(bad.out, "FAIL normalization"));

  const auto one = invoke({"verify", "--only", "eigenstate"});
  CHECK(one.code == kSuccess);
  CHECK(one.out.rfind("PASS eigenstate", 0) == 0);
  CHECK(number_after(one.out, "observed=") <= 1e-8);

  CHECK(invoke({"verify", "--only", "nonsense"}).code == kInvalidInput);
}

TEST_CASE("recipes and config files") {
  const auto list = invoke({"--list-recipes"});
  CHECK(list.code == kSuccess);
  for (const auto& name : recipe_names()) CHECK(contains(list.out, name + "\n"));
  CHECK(contains(list.out, "tv-quadratic"));
  CHECK(contains(list.out, "sqrt-slope"));

  const auto tv = invoke({"--recipe", "tv-quadratic"});
  CHECK(tv.code == kSuccess);
  CHECK(number_after(tv.err, "fit exponent = ") == doctest::Approx(2.0).epsilon(0.05));

  // config < recipe < flags
  const auto cfg = scratch("run.json");
  std::ofstream(cfg) << R"({"command": "energies", "family": "u1", "D": 12, "beta_kappa": 4})";
  const auto a = invoke({"--config", cfg.string()});
  CHECK(a.code == kSuccess);
  CHECK(contains(a.out, "total,4.57142857143"));
  const auto b = invoke({"--config", cfg.string(), "--recipe", "energies-u2"});
  CHECK(contains(b.out, "t_v,195.75,"));
  const auto c = invoke({"--config", cfg.string(), "energies", "--D", "6", "--family", "u0"});
  CHECK(contains(c.out, "total,3,3,"));
  const auto d = invoke({"--config", cfg.string(), "scaling", "--N", "2:3"});
  CHECK(d.code == kInvalidInput);

  std::ofstream(scratch("broken.json")) << "{not json";
  CHECK(invoke({"--config", scratch("broken.json").string()}).code == kInvalidInput);
}

TEST_CASE("config round trip") {
  RunConfig c;
  c.command = "propagate";
  c.family = hyperkin::StateFamily::U2;
  c.d = 30;
  c.r_max = 50.0;
  c.dt = 1e-5;
  c.format = OutputFormat::Json;
  const auto back = config_from_json(config_to_json(c));
  CHECK(back.command == "propagate");
  CHECK(back.family == hyperkin::StateFamily::U2);
  CHECK(*back.d == 30);
  CHECK(*back.r_max == 50.0);
  CHECK(*back.dt == 1e-5);
  CHECK(back.format == OutputFormat::Json);
  CHECK_FALSE(back.n.has_value());
}
