#pragma once

namespace hyperkin::specialfn {

/// Gamma function for x > 0 (Lanczos, g = 7). Throws DomainError for x <= 0.
double gamma(double x);

/// log Gamma(x) for x > 0. Safe for arguments in the thousands.
double log_gamma(double x);

/// Gamma(x + b1) / Gamma(x + b2) evaluated as a difference of logs.
double gamma_ratio(double x, double b1, double b2);

/// Leading-order estimate of Gamma(az + b1) / Gamma(az + b2) from
/// Gamma(az + b) ~ sqrt(2 pi) exp(-az) (az)^(az + b - 1/2).
/// Requires az >= 5.
double gamma_ratio_asymptotic(double a, double z, double b1, double b2);

/// Modified Bessel function of the second kind K_n(zeta), integer n >= 0.
double bessel_k(int n, double zeta);

/// exp(zeta) * K_n(zeta); does not underflow for large zeta.
double bessel_k_scaled(int n, double zeta);

/// log K_n(zeta).
double log_bessel_k(int n, double zeta);

/// K_2(zeta) / K_1(zeta).
double bessel_k_ratio(double zeta);

}  // namespace hyperkin::specialfn
