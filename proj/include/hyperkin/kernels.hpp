#pragma once

// Inner loops of the radial propagator. Every kernel exists twice: a plain
// serial reference and an OpenMP version. The two must agree elementwise
// (bit-exact for the maps, to rounding for the reductions).

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace hyperkin::kernels {

using cplx = std::complex<double>;

enum class Execution { Serial, Parallel };

std::string_view to_string(Execution e);

/// Number of OpenMP threads the parallel kernels will use.
int parallel_threads();

// The Hamiltonian on the grid is tridiagonal with a position-dependent
// diagonal and a constant off-diagonal; values beyond either end are zero.

namespace serial {

/// out = u - tau * (H u)
void cn_rhs(std::span<const double> diag, double off, cplx tau, std::span<const cplx> u,
            std::span<cplx> out);

/// h * sum |u_j|^2
double norm(std::span<const cplx> u, double h);

/// hbar * sum Im(conj(u_j) (u_{j+1} - u_{j-1})) / 2, i.e. <(hbar/i) d/dr> by
/// central differences and the trapezoidal rule. Exactly zero for real u.
double momentum(std::span<const cplx> u, double hbar);

double max_abs2(std::span<const cplx> u);

}  // namespace serial

namespace omp {

void cn_rhs(std::span<const double> diag, double off, cplx tau, std::span<const cplx> u,
            std::span<cplx> out);
double norm(std::span<const cplx> u, double h);
double momentum(std::span<const cplx> u, double hbar);
double max_abs2(std::span<const cplx> u);

}  // namespace omp

void cn_rhs(Execution ex, std::span<const double> diag, double off, cplx tau,
            std::span<const cplx> u, std::span<cplx> out);
double norm(Execution ex, std::span<const cplx> u, double h);
double momentum(Execution ex, std::span<const cplx> u, double hbar);
double max_abs2(Execution ex, std::span<const cplx> u);

/// LU factors of the constant tridiagonal matrix 1 + tau*H, reused every step.
/// The substitution sweeps are sequential by nature.
class TridiagonalLU {
 public:
  TridiagonalLU(std::span<const double> diag, double off, cplx tau);

  /// Solves (1 + tau H) x = rhs in place.
  void solve(std::span<cplx> rhs_to_x) const;

  std::size_t size() const noexcept { return inv_pivot_.size(); }

 private:
  cplx offdiag_;
  std::vector<cplx> inv_pivot_;  // 1 / m_j
  std::vector<cplx> upper_;      // c'_j = off / m_j
};

}  // namespace hyperkin::kernels
