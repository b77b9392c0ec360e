#pragma once

#include <functional>
#include <string_view>

#include "hyperkin/core.hpp"

namespace hyperkin::quadrature {

enum class Method { TanhSinh, GaussKronrod };

std::string_view to_string(Method m);

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  double l1_norm = 0.0;  // integral of |f|, the scale the error is judged against
  Method method = Method::TanhSinh;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Integral of f over [a, b]. Tries tanh-sinh first and falls back to adaptive
/// Gauss-Kronrod (G7/K15) when the requested tolerance is not met.
/// Throws NumericalError if neither rule converges.
Result integrate(const Integrand& f, double a, double b, const Tolerance& tol = {});

/// Integral of f(r) dr over [r_min, r_max] after substituting r = exp(s).
/// Suits radial integrands with structure on several length scales.
Result integrate_radial(const Integrand& f, double r_min, double r_max,
                        const Tolerance& tol = {});

}  // namespace hyperkin::quadrature
