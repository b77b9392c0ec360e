#include "hyperkin/scaling.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>

#include "hyperkin/csv.hpp"
#include "hyperkin/dynamics.hpp"
#include "hyperkin/energy.hpp"

namespace hyperkin {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("fit_power_law: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw PreconditionError("fit_power_law: need at least two points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw PreconditionError("fit_power_law: values must be positive for a log-log fit");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("fit_power_law: all x values are equal");

  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  fit.points = n;
  if (n > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double res = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
      ss += res * res;
    }
    fit.exponent_stderr = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

FermionEnergy fermion_trap_energy(int n, const PhysicalParams& params) {
  params.validate();
  if (n < 1) throw PreconditionError("fermion_trap_energy: N must be >= 1");
  const double quantum = params.hbar * params.omega;
  // Every partial sum is a multiple of 1/2, exact in binary floating point.
  double levels = 0.0;
  for (int j = 0; j < n; ++j) levels += j + 0.5;
  const double nn = n;
  return {quantum * levels, quantum * (nn * nn / 2.0)};
}

std::string_view to_string(ScalingQuantity q) {
  switch (q) {
    case ScalingQuantity::Energy:
      return "energy";
    case ScalingQuantity::Slope:
      return "slope";
    case ScalingQuantity::Fermion:
      return "fermion";
  }
  return "?";
}

ScalingQuantity parse_quantity(std::string_view name) {
  if (name == "energy") return ScalingQuantity::Energy;
  if (name == "slope") return ScalingQuantity::Slope;
  if (name == "fermion") return ScalingQuantity::Fermion;
  throw PreconditionError("unknown quantity '" + std::string(name) +
                          "' (expected energy, slope or fermion)");
}

namespace {

void finish_fit(ScalingTable& table) {
  std::vector<double> xs, ys;
  for (const auto& row : table.rows) {
    xs.push_back(row.n);
    ys.push_back(row.value);
  }
  const auto fit = fit_power_law(xs, ys);
  table.fit_exponent = fit.exponent;
  table.fit_error = fit.exponent_stderr;
}

ScalingTable build_table(ScalingQuantity quantity, StateFamily family,
                         std::span<const int> n_values, const PhysicalParams& params, int jobs,
                         const char* units, const std::function<double(int)>& value_at) {
  params.validate();
  for (int n : n_values) {
    if (n < 2) throw PreconditionError("scaling tables need N >= 2, got " + std::to_string(n));
  }
  ScalingTable table;
  table.quantity = quantity;
  table.family = family;
  table.beta_kappa = params.beta_kappa();
  table.rows.resize(n_values.size());

  const auto count = static_cast<std::ptrdiff_t>(n_values.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const int n = n_values[static_cast<std::size_t>(i)];
      table.rows[static_cast<std::size_t>(i)] = {n, 3 * n, value_at(n), units};
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  finish_fit(table);
  return table;
}

}  // namespace

ScalingTable energy_scaling_table(StateFamily family, std::span<const int> n_values,
                                  const PhysicalParams& params, int jobs) {
  return build_table(ScalingQuantity::Energy, family, n_values, params, jobs, "eps",
                     [&](int n) {
                       const auto dim = HyperDimension::from_particles(n);
                       return t_r_closed(family, dim, params) + t_v_closed(family, dim, params);
                     });
}

ScalingTable slope_scaling_table(StateFamily family, std::span<const int> n_values,
                                 const PhysicalParams& params, int jobs) {
  return build_table(ScalingQuantity::Slope, family, n_values, params, jobs, "eps*kappa",
                     [&](int n) {
                       const RadialState state(family, HyperDimension::from_particles(n), params);
                       return raman_nath_slope_closed(state);
                     });
}

ScalingTable fermion_scaling_table(std::span<const int> n_values, const PhysicalParams& params) {
  params.validate();
  ScalingTable table;
  table.quantity = ScalingQuantity::Fermion;
  table.beta_kappa = params.beta_kappa();
  for (int n : n_values) {
    const auto e = fermion_trap_energy(n, params);
    table.rows.push_back({n, 3 * n, e.closed / (params.hbar * params.omega), "hbar*Omega"});
  }
  finish_fit(table);
  return table;
}

std::string to_csv(const ScalingTable& table) {
  std::string out = "N,D,value,units\n";
  for (const auto& r : table.rows) {
    const std::string fields[] = {std::to_string(r.n), std::to_string(r.d),
                                  csv::format_number(r.value), csv::escape(r.units)};
    out += csv::row(fields);
  }
  return out;
}

nlohmann::json to_json(const ScalingTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"N", r.n}, {"D", r.d}, {"value", r.value}, {"units", r.units}});
  }
  nlohmann::json j = {{"quantity", std::string(to_string(table.quantity))},
                      {"rows", rows},
                      {"fit",
                       {{"method", "ols-log-log"},
                        {"exponent", table.fit_exponent},
                        {"stderr", table.fit_error},
                        {"points", table.rows.size()}}}};
  if (table.family) {
    j["family"] = std::string(to_string(*table.family));
    j["beta_kappa"] = table.beta_kappa;
  }
  return j;
}

std::vector<int> parse_n_values(std::string_view spec) {
  auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw PreconditionError("bad integer '" + std::string(s) + "' in N specification");
    }
    return v;
  };
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = s.find(sep, start);
      parts.push_back(s.substr(start, pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return parts;
  };

  std::vector<int> out;
  if (spec.find(':') != std::string_view::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() < 2 || parts.size() > 3) {
      throw PreconditionError("N range must be a:b or a:b:step");
    }
    const int lo = to_int(parts[0]);
    const int hi = to_int(parts[1]);
    const int step = parts.size() == 3 ? to_int(parts[2]) : 1;
    if (step <= 0 || hi < lo) throw PreconditionError("N range must be increasing");
    for (int n = lo; n <= hi; n += step) out.push_back(n);
  } else {
    for (auto part : split(spec, ',')) out.push_back(to_int(part));
  }
  if (out.empty()) throw PreconditionError("empty N specification");
  return out;
}

}  // namespace hyperkin
