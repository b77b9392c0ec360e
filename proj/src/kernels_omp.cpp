#include <omp.h>

#include <algorithm>

#include "hyperkin/kernels.hpp"

namespace hyperkin::kernels {

namespace {
// Below this many points the fork/join overhead outweighs the loop.
constexpr std::ptrdiff_t kParallelThreshold = 2048;
}  // namespace

int parallel_threads() { return omp_get_max_threads(); }

namespace omp {

void cn_rhs(std::span<const double> diag, double off, cplx tau, std::span<const cplx> u,
            std::span<cplx> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  if (n < 2) {
    serial::cn_rhs(diag, off, tau, u, out);
    return;
  }
  const cplx* up = u.data();
  const double* dp = diag.data();
  cplx* op = out.data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const cplx left = j > 0 ? up[j - 1] : cplx{};
    const cplx right = j + 1 < n ? up[j + 1] : cplx{};
    op[j] = up[j] - tau * (dp[j] * up[j] + off * (left + right));
  }
}

double norm(std::span<const cplx> u, double h) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const cplx* up = u.data();
  double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc) if (n >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) acc += std::norm(up[j]);
  return acc * h;
}

double momentum(std::span<const cplx> u, double hbar) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  if (n < 2) return 0.0;
  const cplx* up = u.data();
  double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc) if (n >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const cplx left = j > 0 ? up[j - 1] : cplx{};
    const cplx right = j + 1 < n ? up[j + 1] : cplx{};
    acc += std::imag(std::conj(up[j]) * (right - left));
  }
  return 0.5 * hbar * acc;
}

double max_abs2(std::span<const cplx> u) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const cplx* up = u.data();
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (n >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) m = std::max(m, std::norm(up[j]));
  return m;
}

}  // namespace omp

}  // namespace hyperkin::kernels
