#include <algorithm>
#include <stdexcept>

#include "hyperkin/kernels.hpp"

namespace hyperkin::kernels {

std::string_view to_string(Execution e) { return e == Execution::Serial ? "serial" : "parallel"; }

namespace serial {

void cn_rhs(std::span<const double> diag, double off, cplx tau, std::span<const cplx> u,
            std::span<cplx> out) {
  const std::size_t n = u.size();
  if (n == 0) return;
  if (n == 1) {
    out[0] = u[0] - tau * (diag[0] * u[0]);
    return;
  }
  out[0] = u[0] - tau * (diag[0] * u[0] + off * u[1]);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    out[j] = u[j] - tau * (diag[j] * u[j] + off * (u[j - 1] + u[j + 1]));
  }
  out[n - 1] = u[n - 1] - tau * (diag[n - 1] * u[n - 1] + off * u[n - 2]);
}

double norm(std::span<const cplx> u, double h) {
  double acc = 0.0;
  for (const auto& z : u) acc += std::norm(z);
  return acc * h;
}

double momentum(std::span<const cplx> u, double hbar) {
  const std::size_t n = u.size();
  if (n < 2) return 0.0;
  double acc = std::imag(std::conj(u[0]) * u[1]);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    acc += std::imag(std::conj(u[j]) * (u[j + 1] - u[j - 1]));
  }
  acc += std::imag(std::conj(u[n - 1]) * (-u[n - 2]));
  return 0.5 * hbar * acc;
}

double max_abs2(std::span<const cplx> u) {
  double m = 0.0;
  for (const auto& z : u) m = std::max(m, std::norm(z));
  return m;
}

}  // namespace serial

void cn_rhs(Execution ex, std::span<const double> diag, double off, cplx tau,
            std::span<const cplx> u, std::span<cplx> out) {
  if (ex == Execution::Serial) {
    serial::cn_rhs(diag, off, tau, u, out);
  } else {
    omp::cn_rhs(diag, off, tau, u, out);
  }
}

double norm(Execution ex, std::span<const cplx> u, double h) {
  return ex == Execution::Serial ? serial::norm(u, h) : omp::norm(u, h);
}

double momentum(Execution ex, std::span<const cplx> u, double hbar) {
  return ex == Execution::Serial ? serial::momentum(u, hbar) : omp::momentum(u, hbar);
}

double max_abs2(Execution ex, std::span<const cplx> u) {
  return ex == Execution::Serial ? serial::max_abs2(u) : omp::max_abs2(u);
}

TridiagonalLU::TridiagonalLU(std::span<const double> diag, double off, cplx tau)
    : offdiag_(tau * off), inv_pivot_(diag.size()), upper_(diag.size()) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("TridiagonalLU: empty system");
  cplx prev_upper = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx pivot = 1.0 + tau * diag[j] - offdiag_ * prev_upper;
    if (std::abs(pivot) == 0.0) throw std::runtime_error("TridiagonalLU: zero pivot");
    inv_pivot_[j] = 1.0 / pivot;
    upper_[j] = offdiag_ * inv_pivot_[j];
    prev_upper = upper_[j];
  }
}

void TridiagonalLU::solve(std::span<cplx> x) const {
  const std::size_t n = inv_pivot_.size();
  if (x.size() != n) throw std::invalid_argument("TridiagonalLU: size mismatch");
  x[0] *= inv_pivot_[0];
  for (std::size_t j = 1; j < n; ++j) {
    x[j] = (x[j] - offdiag_ * x[j - 1]) * inv_pivot_[j];
  }
  for (std::size_t j = n - 1; j-- > 0;) {
    x[j] -= upper_[j] * x[j + 1];
  }
}

}  // namespace hyperkin::kernels
