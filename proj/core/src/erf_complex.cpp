#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rmt/specfun.hpp"

namespace rmt {
namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955126;
constexpr double kTaylorRadius = 2.5;

// erf(z) = 2/sqrt(pi) sum_n (-1)^n z^{2n+1} / (n! (2n+1)).
Complex erf_taylor(Complex z) {
  const Complex mz2 = -z * z;
  Complex term = z, sum = z;
  for (int n = 1; n < 500; ++n) {
    term *= mz2 / static_cast<double>(n);
    const Complex add = term / (2.0 * n + 1.0);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

// erfc(z) = e^{-z^2}/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))), Re z > 0.
Complex erfc_contfrac(Complex z) {
  constexpr double tiny = 1e-300;
  Complex f = z, c = z, d = 0.0;
  for (int j = 1; j < 20000; ++j) {
    const double a = 0.5 * j;
    d = z + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = z + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) return std::exp(-z * z) / (std::sqrt(std::numbers::pi) * f);
  }
  throw std::runtime_error("erfc_c: continued fraction did not converge");
}

// Series of Abramowitz-Stegun 7.1.29 for erf(x + iy); error ~1e-16 |erf|.
// Used for small |Re z| and large |Im z|, where the continued fraction is slow.
Complex erf_strip(double x, double y) {
  const double ex2 = std::exp(-x * x);
  const double c2 = std::cos(2.0 * x * y), s2 = std::sin(2.0 * x * y);
  double re = std::erf(x), im = 0.0;
  if (x != 0.0) {
    re += ex2 / (2.0 * std::numbers::pi * x) * (1.0 - c2);
    im += ex2 / (2.0 * std::numbers::pi * x) * s2;
  } else {
    im += y / std::numbers::pi;
  }
  double sr = 0.0, si = 0.0;
  const int nmax = static_cast<int>(2.0 * std::abs(y)) + 40;
  for (int n = 1; n <= nmax; ++n) {
    const double w = std::exp(-0.25 * n * n) / (n * n + 4.0 * x * x);
    const double ch = std::cosh(n * y), sh = std::sinh(n * y);
    sr += w * (2.0 * x - 2.0 * x * ch * c2 + n * sh * s2);
    si += w * (2.0 * x * ch * s2 + n * sh * c2);
  }
  re += 2.0 / std::numbers::pi * ex2 * sr;
  im += 2.0 / std::numbers::pi * ex2 * si;
  return {re, im};
}

// erfc for Re z >= 0.
Complex erfc_right(Complex z) {
  if (std::abs(z) < kTaylorRadius) return 1.0 - erf_taylor(z);
  if (z.real() >= 0.5) return erfc_contfrac(z);
  return 1.0 - erf_strip(z.real(), z.imag());
}

}  // namespace

Complex erf_c(Complex z) {
  if (std::abs(z) < kTaylorRadius) return erf_taylor(z);
  if (z.real() < 0.0) return -erf_c(-z);
  if (z.real() >= 0.5) return 1.0 - erfc_contfrac(z);
  return erf_strip(z.real(), z.imag());
}

Complex erfc_c(Complex z) {
  if (z.imag() == 0.0) return std::erfc(z.real());
  if (z.real() < 0.0) return 2.0 - erfc_right(-z);
  return erfc_right(z);
}

Complex erfi(Complex z) {
  if (z.imag() == 0.0) return erfi(z.real());
  return Complex(0.0, -1.0) * erf_c(Complex(-z.imag(), z.real()));
}

double erfi_scaled(double x) {
  const double ax = std::abs(x);
  if (ax <= 6.0) {
    // sum x^{2n+1} / (n! (2n+1)), all terms positive.
    const double x2 = x * x;
    double term = x, sum = x;
    for (int n = 1; n < 500; ++n) {
      term *= x2 / n;
      const double add = term / (2.0 * n + 1.0);
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return kTwoOverSqrtPi * sum * std::exp(-x2);
  }
  return kTwoOverSqrtPi * dawson(x);
}

double dawson(double x) {
  const double ax = std::abs(x);
  if (ax <= 6.0) {
    if (x == 0.0) return 0.0;
    return erfi_scaled(x) / kTwoOverSqrtPi;
  }
  // D(x) ~ 1/(2x) sum_k (2k-1)!! / (2x^2)^k; smallest term near k = x^2 is below e^{-36}.
  const double r = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * (2.0 * k - 1.0) * r;
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / (2.0 * x);
}

double erfi(double x) {
  if (std::abs(x) <= 6.0) return erfi_scaled(x) * std::exp(x * x);
  const double e = std::exp(x * x);
  if (!std::isfinite(e)) return x > 0 ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
  return kTwoOverSqrtPi * dawson(x) * e;
}

}  // namespace rmt
