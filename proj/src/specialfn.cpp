#include "hyperkin/specialfn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "hyperkin/core.hpp"

namespace hyperkin::specialfn {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos series A(x) for Gamma(x) = sqrt(2 pi) t^(x-1/2) e^-t A(x), t = x + g - 1/2.
double lanczos_sum(double x) {
  const double xm1 = x - 1.0;
  double sum = kLanczosCoeff[0];
  for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) {
    sum += kLanczosCoeff[i] / (xm1 + static_cast<double>(i));
  }
  return sum;
}

void require_positive_arg(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(fn) + ": argument must be positive and finite, got " +
                      std::to_string(x));
  }
}

constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;

// K_0 and K_1 at x, both multiplied by exp(x) when scaled is true.
// Temme's series below x = 2, Steed's continued fraction CF2 above.
std::pair<double, double> bessel_k01(double x, bool scaled) {
  constexpr double euler_gamma = 0.57721566490153286061;
  if (x < 2.0) {
    const double half = 0.5 * x;
    const double d = -std::log(half);
    double ff = d - euler_gamma;
    double sum = ff;
    double p = 0.5;
    double q = 0.5;
    double c = 1.0;
    const double x2 = half * half;
    double sum1 = p;
    for (int i = 1; i <= kMaxIter; ++i) {
      const double fi = i;
      ff = (fi * ff + p + q) / (fi * fi);
      c *= x2 / fi;
      p /= fi;
      q /= fi;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - fi * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    const double k0 = sum;
    const double k1 = sum1 * 2.0 / x;
    const double s = scaled ? std::exp(x) : 1.0;
    return {k0 * s, k1 * s};
  }

  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  if (!scaled) k0 *= std::exp(-x);
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

double bessel_k_impl(int n, double zeta, bool scaled) {
  if (n < 0) {
    throw DomainError("bessel_k: order must be non-negative");
  }
  require_positive_arg(zeta, "bessel_k");
  auto [km, k] = bessel_k01(zeta, scaled);
  if (n == 0) return km;
  // Upward recurrence K_{j+1} = K_{j-1} + (2j/zeta) K_j is stable for K.
  for (int j = 1; j < n; ++j) {
    const double next = km + (2.0 * j / zeta) * k;
    km = k;
    k = next;
  }
  return k;
}

}  // namespace

double gamma(double x) {
  require_positive_arg(x, "gamma");
  if (x < 0.5) {
    return gamma(x + 1.0) / x;
  }
  if (x > 171.0) {
    throw DomainError("gamma: overflow for x = " + std::to_string(x) + "; use log_gamma");
  }
  const double t = x + kLanczosG - 0.5;
  // t^{x-1/2} alone overflows above x ~ 143; split it around exp(-t).
  const double half = std::pow(t, 0.5 * (x - 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * std::exp(-t) * half * lanczos_sum(x);
}

double log_gamma(double x) {
  require_positive_arg(x, "log_gamma");
  if (x < 0.5) {
    return log_gamma(x + 1.0) - std::log(x);
  }
  const double t = x + kLanczosG - 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x - 0.5) * std::log(t) - t +
         std::log(lanczos_sum(x));
}

double gamma_ratio(double x, double b1, double b2) {
  return std::exp(log_gamma(x + b1) - log_gamma(x + b2));
}

double gamma_ratio_asymptotic(double a, double z, double b1, double b2) {
  const double az = a * z;
  if (!(az >= 5.0)) {
    throw PreconditionError("gamma_ratio_asymptotic: a*z must be >= 5, got " +
                            std::to_string(az));
  }
  // The sqrt(2 pi) e^{-az} factors cancel; what remains is (az)^(b1 - b2).
  const double log_num = (az + b1 - 0.5) * std::log(az);
  const double log_den = (az + b2 - 0.5) * std::log(az);
  return std::exp(log_num - log_den);
}

double bessel_k(int n, double zeta) { return bessel_k_impl(n, zeta, false); }

double bessel_k_scaled(int n, double zeta) { return bessel_k_impl(n, zeta, true); }

double log_bessel_k(int n, double zeta) { return std::log(bessel_k_scaled(n, zeta)) - zeta; }

double bessel_k_ratio(double zeta) {
  require_positive_arg(zeta, "bessel_k_ratio");
  // The common exp(-zeta) cancels, so the scaled pair never underflows.
  if (zeta > 50.0) {
    return std::exp(std::log(bessel_k_scaled(2, zeta)) - std::log(bessel_k_scaled(1, zeta)));
  }
  return bessel_k(2, zeta) / bessel_k(1, zeta);
}

}  // namespace hyperkin::specialfn
