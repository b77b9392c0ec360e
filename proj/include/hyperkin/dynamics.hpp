#pragma once

// Free expansion of a radial state after the trap is switched off.
//
// Units: times are in hbar/epsilon, momenta in hbar*kappa, and momentum slopes
// d<p_r>/dt in epsilon*kappa. These coincide with the physical values only
// when hbar = M = kappa = 1 and epsilon = 1/2 is accounted for.

#include <atomic>
#include <complex>
#include <cstddef>
#include <vector>

#include "hyperkin/core.hpp"
#include "hyperkin/kernels.hpp"
#include "hyperkin/states.hpp"

namespace hyperkin {

/// F_Q = -dV_Q/dr = (hbar^2/2M) (D-1)(D-3) / (2 r^3), physical units.
double centrifugal_force(HyperDimension dim, const PhysicalParams& params, double r);

/// Initial slope int F_Q |u|^2 dr by quadrature. Throws DivergenceError when <r^-3> does not exist.
double raman_nath_slope(const RadialState& state, const Tolerance& tol = {});

/// Closed-form Raman-Nath slopes (Gamma ratios for u0/u1, Bessel ratio for u2).
/// u0 needs D >= 4 unless the strength vanishes.
double raman_nath_slope_closed(const RadialState& state);

/// (hbar^2/2M) u'(0)^2: the push a state with u ~ r at the origin receives from r = 0.
/// Zero for every state whose |u|^2 vanishes faster than r^2.
double origin_slope_term(const RadialState& state);

/// Large-D law sqrt(2D) shared by u0 and u1. Requires D >= 30.
double asymptotic_slope_u0u1(HyperDimension dim, const PhysicalParams& params);

/// Uniform grid r_j = j * spacing, j = 1..n_points, with u = 0 at r = 0 and at
/// r = (n_points + 1) * spacing.
struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;  // last interior point
  std::size_t n_points = 0;
  double spacing = 0.0;

  static RadialGrid uniform(double outer_boundary, std::size_t n_points);

  double r(std::size_t j) const noexcept { return static_cast<double>(j + 1) * spacing; }
  double outer_boundary() const noexcept { return r_max + spacing; }

  /// Same outer boundary, spacing halved.
  RadialGrid refined() const;

  void validate() const;
};

/// Default grid: 4096 points out to where u drops below 1e-13 of its peak
/// (at least 12/kappa).
RadialGrid default_grid(const RadialState& state, std::size_t n_points = 4096);

/// Largest step allowed by the accuracy policy: dt <= 0.1 * 2M dr^2 / hbar and
/// max|V_Q| dt / hbar <= 0.1 where the state has amplitude. Natural time units.
double policy_time_step(const RadialState& state, const RadialGrid& grid);

/// Time window for slope fits: min(0.0025, 0.01 epsilon / T) in units of hbar/epsilon.
double slope_fit_window(const RadialState& state);

/// Progress/abort hook shared with a supervising thread.
class PropagationControl {
 public:
  void request_abort() noexcept { abort_.store(true, std::memory_order_relaxed); }
  bool abort_requested() const noexcept { return abort_.load(std::memory_order_relaxed); }
  std::size_t steps_done() const noexcept { return steps_.load(std::memory_order_relaxed); }
  void set_steps_done(std::size_t n) noexcept { steps_.store(n, std::memory_order_relaxed); }

 private:
  std::atomic<bool> abort_{false};
  std::atomic<std::size_t> steps_{0};
};

struct PropagationOptions {
  kernels::Execution execution = kernels::Execution::Parallel;
  std::size_t sample_every = 1;
  std::size_t check_every = 100;
  double max_norm_drift = 1e-4;
  double reflection_threshold = 1e-8;  // |u|^2 at the outer edge relative to the peak
  PropagationControl* control = nullptr;
};

struct PropagationResult {
  std::vector<double> times;      // hbar/epsilon
  std::vector<double> p_r_mean;   // hbar*kappa
  std::vector<double> norm;
  double analytic_slope = 0.0;    // epsilon*kappa, int F_Q |u|^2 dr
  double dt = 0.0;
  std::size_t n_steps = 0;
  RadialGrid grid;
  bool aborted = false;
};

/// Crank-Nicolson propagation of i hbar du/dt = [-(hbar^2/2M) d^2/dr^2 + V_Q] u
/// with Dirichlet walls. Samples <p_r> and the norm every `sample_every` steps.
/// Throws NumericalError on norm drift above the limit or on boundary reflection.
PropagationResult propagate_free(const RadialState& state, const RadialGrid& grid, double dt,
                                 std::size_t n_steps, const PropagationOptions& options = {});

struct SlopeFit {
  double slope = 0.0;   // epsilon*kappa
  double cubic = 0.0;
  double quintic = 0.0;
  double window = 0.0;
  std::size_t samples = 0;
};

/// Least-squares fit of <p_r>(t) = a t + b t^3 + c t^5 over [0, window].
/// <p_r> is odd in t for a real initial state, so even powers are absent.
SlopeFit fit_initial_slope(const PropagationResult& result, double window);

/// Propagates over the slope-fit window with the policy time step and fits the slope.
struct SlopeMeasurement {
  double measured = 0.0;
  double analytic = 0.0;   // raman_nath_slope
  double expected = 0.0;   // analytic + origin_slope_term
  double rel_error = 0.0;  // |measured - expected| / |expected|
  double dt = 0.0;
  std::size_t n_steps = 0;
  RadialGrid grid;
  double max_norm_drift = 0.0;
};

SlopeMeasurement measure_tdse_slope(const RadialState& state, const RadialGrid& grid,
                                    double dt = 0.0,
                                    const PropagationOptions& options = {});

/// u(r,0) exp(-i [W(r) + V_Q(r)] t / hbar) with W = -(hbar^2/2M) u''/u; t in hbar/epsilon.
std::complex<double> short_time_phase_state(const RadialState& state, double t, double r);

/// <p_r>(t) for the short-time phase state, by quadrature of
/// int u* (hbar/i) du/dr dr. Units of hbar*kappa.
double phase_state_momentum(const RadialState& state, double t, const Tolerance& tol = {});

}  // namespace hyperkin
