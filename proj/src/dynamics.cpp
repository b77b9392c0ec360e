#include "hyperkin/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "hyperkin/energy.hpp"
#include "hyperkin/quadrature.hpp"
#include "hyperkin/specialfn.hpp"

namespace hyperkin {

double centrifugal_force(HyperDimension dim, const PhysicalParams& params, double r) {
  if (!(r > 0.0)) {
    throw DomainError("centrifugal_force: radius must be positive");
  }
  return params.kinetic_prefactor() * static_cast<double>(dim.strength()) / (2.0 * r * r * r);
}

double raman_nath_slope(const RadialState& state, const Tolerance& tol) {
  const auto& p = state.params();
  const long long s = state.dim().strength();
  if (s == 0) return 0.0;
  if (!(state.small_r_power() > 2.0)) {
    throw DivergenceError("<r^-3> diverges for " + std::string(to_string(state.family())) +
                              " at D = " + std::to_string(state.dim().value()),
                          "small-r behaviour |u|^2 ~ r^" +
                              std::to_string(state.small_r_power()));
  }
  const auto support = state.weighted_support(3.0);
  auto integrand = [&state](double r) { return std::exp(2.0 * state.log_u(r)) / (r * r * r); };
  const auto res = quadrature::integrate_radial(integrand, support.r_min, support.r_max, tol);
  const double force_integral = res.value * p.kinetic_prefactor() * static_cast<double>(s) / 2.0;
  return force_integral / (p.epsilon() * p.kappa);
}

double raman_nath_slope_closed(const RadialState& state) {
  const auto& p = state.params();
  const long long s = state.dim().strength();
  if (s == 0) return 0.0;
  const double d = state.dim().value();
  switch (state.family()) {
    case StateFamily::U0:
      if (state.dim().value() < 4) {
        throw PreconditionError("u0 Raman-Nath slope needs D >= 4 (<r^-3> diverges at D = 2)");
      }
      return (d - 1.0) *
             std::exp(specialfn::log_gamma(0.5 * (d - 1.0)) - specialfn::log_gamma(0.5 * d));
    case StateFamily::U1:
      return 0.5 * static_cast<double>(s) *
             std::exp(specialfn::log_gamma(0.5 * (d + 1.0)) -
                      specialfn::log_gamma(0.5 * (d + 4.0)));
    case StateFamily::U2: {
      const double bk = p.beta_kappa();
      return static_cast<double>(s) / (2.0 * std::pow(bk, 1.5)) *
             specialfn::bessel_k_ratio(2.0 * std::sqrt(bk));
    }
  }
  return 0.0;
}

double origin_slope_term(const RadialState& state) {
  if (state.small_r_power() != 2.0) return 0.0;
  // u ~ N r near the origin, so u'(0) = N.
  const auto& p = state.params();
  const double n2 = std::exp(2.0 * state.log_norm_constant());
  return p.kinetic_prefactor() * n2 / (p.epsilon() * p.kappa);
}

double asymptotic_slope_u0u1(HyperDimension dim, const PhysicalParams& params) {
  params.validate();
  if (dim.value() < 30) {
    throw PreconditionError("asymptotic slope law needs D >= 30, got D = " +
                            std::to_string(dim.value()));
  }
  return std::sqrt(2.0 * dim.value());
}

RadialGrid RadialGrid::uniform(double outer_boundary, std::size_t n_points) {
  RadialGrid g;
  g.n_points = n_points;
  g.spacing = outer_boundary / static_cast<double>(n_points + 1);
  g.r_min = g.spacing;
  g.r_max = g.spacing * static_cast<double>(n_points);
  g.validate();
  return g;
}

RadialGrid RadialGrid::refined() const { return uniform(outer_boundary(), 2 * n_points + 1); }

void RadialGrid::validate() const {
  if (n_points < 512) {
    throw PreconditionError("radial grid needs at least 512 points, got " +
                            std::to_string(n_points));
  }
  if (!(spacing > 0.0) || !(r_min > 0.0) || !(r_min < r_max)) {
    throw PreconditionError("radial grid needs 0 < r_min < r_max");
  }
}

RadialGrid default_grid(const RadialState& state, std::size_t n_points) {
  const double edge = state.amplitude_support(1e-13).r_max;
  return RadialGrid::uniform(std::max(12.0 / state.params().kappa, edge), n_points);
}

double policy_time_step(const RadialState& state, const RadialGrid& grid) {
  const auto& p = state.params();
  double dt = 0.1 * 2.0 * p.mass * grid.spacing * grid.spacing / p.hbar;
  // V_Q only matters where the state lives; below the 1e-12 amplitude edge it is inert.
  const double edge = std::max(grid.r_min, state.amplitude_support(1e-12).r_min);
  const double vmax = std::abs(v_q(state.dim(), p, edge));
  if (vmax > 0.0) dt = std::min(dt, 0.1 * p.hbar / vmax);
  return dt * p.epsilon() / p.hbar;
}

double slope_fit_window(const RadialState& state) {
  double total = 0.0;
  try {
    total = energy_report(state, EnergyMethod::ClosedForm).total;
  } catch (const PreconditionError&) {
    total = t_r_quadrature(state);
  }
  return std::min(0.0025, 0.01 / std::max(total, 1e-300));
}

namespace {

void check_state_on_grid(const RadialState& state, const RadialGrid& grid) {
  if (!(state.small_r_power() > 0.0)) {
    throw PreconditionError("state does not vanish at r = 0; the Dirichlet wall would cut it");
  }
  const double peak = state.peak_radius();
  const double ref = state.log_u(peak);
  if (state.log_u(grid.outer_boundary()) - ref > std::log(1e-12)) {
    throw PreconditionError("grid too short: u at the outer wall exceeds 1e-12 of its peak");
  }
  // |u|^2 falls to half its peak where u = peak / sqrt(2).
  const auto half = state.amplitude_support(1.0 / std::sqrt(2.0));
  const double width = half.r_max - half.r_min;
  if (width / grid.spacing < 20.0) {
    std::ostringstream msg;
    msg << "grid too coarse: " << width / grid.spacing
        << " points across the |u|^2 peak width (need >= 20)";
    throw PreconditionError(msg.str());
  }
}

}  // namespace

PropagationResult propagate_free(const RadialState& state, const RadialGrid& grid, double dt,
                                 std::size_t n_steps, const PropagationOptions& options) {
  using kernels::cplx;
  grid.validate();
  if (!(dt > 0.0)) throw PreconditionError("propagate_free: dt must be positive");
  if (options.sample_every == 0 || options.check_every == 0) {
    throw PreconditionError("propagate_free: sample/check intervals must be positive");
  }
  check_state_on_grid(state, grid);

  const auto& p = state.params();
  const std::size_t n = grid.n_points;
  const double h = grid.spacing;
  const double kp = p.kinetic_prefactor();
  const double dt_phys = dt * p.hbar / p.epsilon();
  const double momentum_unit = p.hbar * p.kappa;

  std::vector<double> diag(n);
  for (std::size_t j = 0; j < n; ++j) {
    diag[j] = 2.0 * kp / (h * h) + v_q(state.dim(), p, grid.r(j));
  }
  const double off = -kp / (h * h);
  const cplx tau{0.0, dt_phys / (2.0 * p.hbar)};
  const kernels::TridiagonalLU lhs(diag, off, tau);

  std::vector<cplx> u(n);
  std::vector<cplx> rhs(n);
  const double ref = state.log_u(state.peak_radius());
  for (std::size_t j = 0; j < n; ++j) u[j] = std::exp(state.log_u(grid.r(j)) - ref);
  const double n0 = kernels::norm(options.execution, u, h);
  const double scale = 1.0 / std::sqrt(n0);
  for (auto& z : u) z *= scale;

  PropagationResult out;
  out.grid = grid;
  out.dt = dt;
  out.n_steps = n_steps;
  out.analytic_slope = raman_nath_slope(state);
  const std::size_t n_samples = n_steps / options.sample_every + 2;
  out.times.reserve(n_samples);
  out.p_r_mean.reserve(n_samples);
  out.norm.reserve(n_samples);

  auto record = [&](std::size_t step) {
    out.times.push_back(static_cast<double>(step) * dt);
    out.p_r_mean.push_back(kernels::momentum(options.execution, u, p.hbar) / momentum_unit);
    out.norm.push_back(kernels::norm(options.execution, u, h));
  };
  record(0);

  auto check = [&](std::size_t step) {
    const double nrm = kernels::norm(options.execution, u, h);
    if (std::abs(nrm - 1.0) > options.max_norm_drift) {
      std::ostringstream diag_msg;
      diag_msg << "step " << step << " norm " << nrm << " drift " << nrm - 1.0;
      throw NumericalError("norm drift exceeded " + std::to_string(options.max_norm_drift),
                           diag_msg.str());
    }
    const double peak = kernels::max_abs2(options.execution, u);
    const double edge = std::norm(u[n - 1]);
    if (edge > options.reflection_threshold * peak) {
      std::ostringstream diag_msg;
      diag_msg << "step " << step << " |u|^2 at outer edge " << edge << " vs peak " << peak;
      throw NumericalError("wave reached the outer wall (reflection)", diag_msg.str());
    }
  };

  for (std::size_t step = 1; step <= n_steps; ++step) {
    if (options.control != nullptr && options.control->abort_requested()) {
      out.aborted = true;
      break;
    }
    kernels::cn_rhs(options.execution, diag, off, tau, u, rhs);
    lhs.solve(rhs);
    u.swap(rhs);
    if (step % options.sample_every == 0 || step == n_steps) record(step);
    if (step % options.check_every == 0 || step == n_steps) check(step);
    if (options.control != nullptr) options.control->set_steps_done(step);
  }
  return out;
}

namespace {

// Solves the k x k system a x = b (row-major) by Gaussian elimination with partial pivoting.
template <std::size_t K>
std::array<double, K> solve_small(std::array<std::array<double, K>, K> a, std::array<double, K> b) {
  for (std::size_t c = 0; c < K; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < K; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    if (a[c][c] == 0.0) throw NumericalError("slope fit: singular normal equations");
    for (std::size_t r = c + 1; r < K; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < K; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::array<double, K> x{};
  for (std::size_t c = K; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < K; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return x;
}

}  // namespace

SlopeFit fit_initial_slope(const PropagationResult& result, double window) {
  if (!(window > 0.0)) throw PreconditionError("slope fit window must be positive");
  constexpr std::size_t K = 3;
  std::array<std::array<double, K>, K> ata{};
  std::array<double, K> atb{};
  std::size_t used = 0;
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const double t = result.times[i];
    if (t > window * (1.0 + 1e-12)) break;
    const double x = t / window;
    const std::array<double, K> basis{x, x * x * x, x * x * x * x * x};
    for (std::size_t a = 0; a < K; ++a) {
      for (std::size_t b = 0; b < K; ++b) ata[a][b] += basis[a] * basis[b];
      atb[a] += basis[a] * result.p_r_mean[i];
    }
    ++used;
  }
  if (used < 8) {
    throw NumericalError("slope fit needs at least 8 samples inside the window, got " +
                         std::to_string(used));
  }
  const auto coef = solve_small<K>(ata, atb);
  SlopeFit fit;
  fit.slope = coef[0] / window;
  fit.cubic = coef[1] / (window * window * window);
  fit.quintic = coef[2] / std::pow(window, 5);
  fit.window = window;
  fit.samples = used;
  return fit;
}

SlopeMeasurement measure_tdse_slope(const RadialState& state, const RadialGrid& grid, double dt,
                                    const PropagationOptions& options) {
  const double window = slope_fit_window(state);
  if (!(dt > 0.0)) dt = policy_time_step(state, grid);
  const auto n_steps = static_cast<std::size_t>(std::ceil(window / dt));
  dt = window / static_cast<double>(n_steps);

  PropagationOptions opts = options;
  opts.sample_every = 1;
  const auto result = propagate_free(state, grid, dt, n_steps, opts);
  const auto fit = fit_initial_slope(result, window);

  SlopeMeasurement m;
  m.measured = fit.slope;
  m.analytic = result.analytic_slope;
  m.expected = m.analytic + origin_slope_term(state);
  m.rel_error = m.expected != 0.0 ? std::abs(m.measured - m.expected) / std::abs(m.expected)
                                  : std::abs(m.measured);
  m.dt = dt;
  m.n_steps = n_steps;
  m.grid = grid;
  for (double nrm : result.norm) m.max_norm_drift = std::max(m.max_norm_drift, std::abs(nrm - 1.0));
  return m;
}

std::complex<double> short_time_phase_state(const RadialState& state, double t, double r) {
  const auto& p = state.params();
  const double peak = state.peak_radius();
  if (state.log_u(r) - state.log_u(peak) < std::log(1e-12)) {
    throw DomainError("W(r) is evaluated only where |u| > 1e-12 of its peak");
  }
  // Phase rate in units of epsilon/hbar, so that phase = rate * t for t in hbar/epsilon.
  auto rate = [&](double x) {
    const double w = -p.kinetic_prefactor() * state.curvature_ratio(x);
    return (w + v_q(state.dim(), p, x)) / p.epsilon();
  };
  if (std::abs(rate(peak) * t) > 0.5) {
    throw PreconditionError("short_time_phase_state: |(W + V_Q) t / hbar| > 0.5 at the peak");
  }
  return std::polar(state.u(r), -rate(r) * t);
}

double phase_state_momentum(const RadialState& state, double t, const Tolerance& tol) {
  const auto& p = state.params();
  if (state.family() == StateFamily::U0 && state.dim().value() == 2) {
    throw DivergenceError("<r^-3> diverges for u0 at D = 2");
  }
  // Re[u* (hbar/i) u'] = -(W' + V_Q') t_phys |u0|^2 = (F_Q + (hbar^2/2M) (u''/u)') t_phys |u0|^2
  const auto support = state.weighted_support(3.0);
  auto integrand = [&](double r) {
    const double force = centrifugal_force(state.dim(), p, r) +
                         p.kinetic_prefactor() * state.curvature_ratio_derivative(r);
    return force * std::exp(2.0 * state.log_u(r));
  };
  const auto res = quadrature::integrate_radial(integrand, support.r_min, support.r_max, tol);
  return t * res.value / (p.epsilon() * p.kappa);
}

}  // namespace hyperkin
