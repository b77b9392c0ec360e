// Serial reference versus OpenMP kernels on grids of increasing size.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hyperkin/dynamics.hpp"
#include "hyperkin/kernels.hpp"
#include "hyperkin/states.hpp"

namespace {

using hyperkin::kernels::cplx;
using hyperkin::kernels::Execution;

struct Workload {
  std::vector<double> diag;
  std::vector<cplx> u;
  std::vector<cplx> out;
  double off = 0.0;
  double h = 0.0;

  explicit Workload(std::size_t n) : diag(n), u(n), out(n) {
    h = 20.0 / static_cast<double>(n + 1);
    off = -0.5 / (h * h);
    for (std::size_t j = 0; j < n; ++j) {
      const double r = static_cast<double>(j + 1) * h;
      diag[j] = 1.0 / (h * h) + 2.0 / (r * r);
      u[j] = cplx(r * r * std::exp(-r * r / 2.0), 0.01 * r * std::exp(-r));
    }
  }
};

Execution mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(std::string(hyperkin::kernels::to_string(mode(state))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CnRhs(benchmark::State& state) {
  Workload w(static_cast<std::size_t>(state.range(0)));
  const cplx tau(0.0, 1e-4);
  for (auto _ : state) {
    hyperkin::kernels::cn_rhs(mode(state), w.diag, w.off, tau, w.u, w.out);
    benchmark::DoNotOptimize(w.out.data());
  }
  label(state);
}

void BM_Norm(benchmark::State& state) {
  Workload w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hyperkin::kernels::norm(mode(state), w.u, w.h));
  label(state);
}

void BM_Momentum(benchmark::State& state) {
  Workload w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hyperkin::kernels::momentum(mode(state), w.u, 1.0));
  label(state);
}

void BM_MaxAbs2(benchmark::State& state) {
  Workload w(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hyperkin::kernels::max_abs2(mode(state), w.u));
  label(state);
}

// Whole propagation of a u0 state over a short window.
void BM_Propagate(benchmark::State& state) {
  const hyperkin::RadialState s(hyperkin::StateFamily::U0, hyperkin::HyperDimension(6));
  const auto grid = hyperkin::default_grid(s, static_cast<std::size_t>(state.range(0)));
  hyperkin::PropagationOptions opts;
  opts.execution = mode(state);
  opts.sample_every = 10;
  for (auto _ : state) {
    auto res = hyperkin::propagate_free(s, grid, 1e-5, 100, opts);
    benchmark::DoNotOptimize(res.p_r_mean.data());
  }
  label(state);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {4096L, 65536L, 1L << 20}) {
    b->Args({n, 0});
    b->Args({n, 1});
  }
}

}  // namespace

BENCHMARK(BM_CnRhs)->Apply(sizes);
BENCHMARK(BM_Norm)->Apply(sizes);
BENCHMARK(BM_Momentum)->Apply(sizes);
BENCHMARK(BM_MaxAbs2)->Apply(sizes);
BENCHMARK(BM_Propagate)->Args({4096, 0})->Args({4096, 1})->Args({32768, 0})->Args({32768, 1});

BENCHMARK_MAIN();
