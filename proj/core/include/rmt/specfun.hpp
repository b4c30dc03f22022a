#pragma once

#include <vector>

#include "rmt/types.hpp"

namespace rmt {

// Value m * exp(log_scale), for quantities whose magnitude leaves double range.
struct ScaledComplex {
  Complex mantissa;
  double log_scale = 0.0;
  Complex value() const;  // throws std::overflow_error if not representable
  Complex log() const;    // principal log
};

// Truncated exponential E_n(x) = sum_{j<=n} x^j / j!.
Complex trunc_exp(int n, Complex x);
ScaledComplex trunc_exp_scaled(int n, Complex x);
Complex log_trunc_exp(int n, Complex x);

// Regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a), P = 1 - Q.
// Complex x is supported for all a > 0 (principal branch of x^a); the
// negative real half-axis beyond |x| > a + 1 needs integer or half-integer a.
Complex upper_gamma_reg(double a, Complex x);
double upper_gamma_reg(double a, double x);
double lower_gamma_reg(double a, double x);
// Q(m, x) for m = 0..m_max (entry 0 is unused and set to 1), real x >= 0.
// Built from cumulative Poisson weights, so small values keep relative accuracy.
std::vector<double> upper_gamma_reg_ladder(int m_max, double x);
// log(x^a e^{-x} / Gamma(a+1)) for a >= 0, x > 0, without cancellation at x ~ a.
double log_poisson_weight(double a, double x);

Complex erf_c(Complex z);
Complex erfc_c(Complex z);
Complex erfi(Complex z);
double erfi(double x);
// e^{-x^2} erfi(x) = (2/sqrt(pi)) * Dawson(x); finite for all real x.
double erfi_scaled(double x);
double dawson(double x);

// Owen's T continued to imaginary second argument:
//   T(x, i b) = (i / 2 pi) * int_0^b exp(-x^2 (1 - u^2) / 2) / (1 - u^2) du,  |b| < 1.
Complex owen_t_imag(double x, double b);
Complex owen_t_imag(Complex x, double b);

// Pfaffian by skew Parlett-Reid elimination with partial pivoting.
// Throws std::invalid_argument for odd or non-square input and for skew
// violations above 1e-12 (relative to the largest entry when that exceeds 1).
Complex pfaffian(const CMatrix& m);
double pfaffian(const RMatrix& m);

// 2F1(a, b; c; 1/2) by direct series.
double gauss_2f1_half(double a, double b, double c);

}  // namespace rmt
