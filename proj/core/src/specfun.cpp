#include "rmt/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rmt/quadrature.hpp"

namespace rmt {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kMaxLog = 709.0;
constexpr int kMaxIter = 200000;

// lgamma(a+1) - [(a+1/2) log a - a + log(2 pi)/2], Stirling series, a >= 15.
double stirling_corr(double a) {
  const double r = 1.0 / a, r2 = r * r;
  return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
}

Complex wrap_log(Complex l) {
  // Bring the imaginary part into (-pi, pi].
  double im = std::remainder(l.imag(), 2.0 * std::numbers::pi);
  if (im <= -std::numbers::pi) im += 2.0 * std::numbers::pi;
  return {l.real(), im};
}

ScaledComplex make_scaled(Complex log_value_prefactor, Complex factor) {
  // exp(L) * factor as a scaled number.
  return {factor * std::exp(Complex(0.0, log_value_prefactor.imag())), log_value_prefactor.real()};
}

// sum_k x^k / ((a+1)(a+2)...(a+k)), the series part of P(a, x).
template <typename T>
T p_series(double a, T x) {
  T sum = 1.0, term = 1.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  throw std::runtime_error("incomplete gamma: series did not converge");
}

// Legendre continued fraction for Gamma(a, x) e^x x^{-a}, modified Lentz.
template <typename T>
T q_contfrac(double a, T x) {
  T b = x + 1.0 - a;
  T c = 1.0 / kTiny;
  T d = 1.0 / b;
  T h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const T del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 4 * kEps) return h;
  }
  throw std::runtime_error("incomplete gamma: continued fraction did not converge");
}

// e^{-x} E_n(x) for |x| > n + 1, where the terms of E_n grow with j so the
// backward-scaled sum sum_i n!/(n-i)! x^{-i} is well conditioned.
ScaledComplex poisson_tail_backward(int n, Complex x) {
  Complex s = 1.0, t = 1.0;
  for (int i = 1; i <= n; ++i) {
    t *= static_cast<double>(n - i + 1) / x;
    s += t;
  }
  const Complex l = static_cast<double>(n) * std::log(x) - x - std::lgamma(n + 1.0);
  return make_scaled(l, s);
}

bool is_integer(double a) { return a == std::floor(a); }
bool is_half_integer(double a) { return is_integer(a - 0.5); }

ScaledComplex upper_gamma_scaled(double a, Complex x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("upper_gamma_reg: a must be positive");
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw std::domain_error("upper_gamma_reg: non-finite x");
  if (x == Complex(0.0)) return {1.0, 0.0};
  if (x.imag() == 0.0 && x.real() > 0.0) return {upper_gamma_reg(a, x.real()), 0.0};

  const double ax = std::abs(x);
  if (ax < a + 1.0) {
    const Complex l = a * std::log(x) - x - std::lgamma(a + 1.0);
    const Complex s = p_series(a, x);
    if (l.real() < kMaxLog) return {1.0 - std::exp(l) * s, 0.0};
    return make_scaled(l, -s);  // |P| is astronomically larger than 1
  }
  if (x.real() > 0.0 || std::abs(x.imag()) > 0.5 * ax) {
    // Q = a * x^a e^{-x} / Gamma(a+1) * CF
    const Complex l = a * std::log(x) - x - std::lgamma(a);
    return make_scaled(l, q_contfrac(a, x));
  }
  if (is_integer(a)) return poisson_tail_backward(static_cast<int>(a) - 1, x);
  if (is_half_integer(a)) {
    // Q(m + 1/2, x) = erfc(sqrt x) + e^{-x} sum_{j<m} x^{j+1/2} / Gamma(j + 3/2)
    const int m = static_cast<int>(a - 0.5);
    Complex acc = erfc_c(std::sqrt(x));
    for (int j = 0; j < m; ++j)
      acc += std::exp((j + 0.5) * std::log(x) - x - std::lgamma(j + 1.5));
    return {acc, 0.0};
  }
  const Complex l = a * std::log(x) - x - std::lgamma(a);
  return make_scaled(l, q_contfrac(a, x));
}

}  // namespace

Complex ScaledComplex::value() const {
  if (mantissa == Complex(0.0)) return 0.0;
  if (log_scale > kMaxLog) throw std::overflow_error("value exceeds double range");
  return mantissa * std::exp(log_scale);
}

Complex ScaledComplex::log() const { return wrap_log(std::log(mantissa) + log_scale); }

double log_poisson_weight(double a, double x) {
  if (a < 0.0) throw std::domain_error("log_poisson_weight: a < 0");
  if (x == 0.0) return a == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (a == 0.0) return -x;
  if (a < 15.0) return a * std::log(x) - x - std::lgamma(a + 1.0);
  const double t = (x - a) / a;
  return a * (std::log1p(t) - t) - 0.5 * std::log(2.0 * std::numbers::pi * a) - stirling_corr(a);
}

double upper_gamma_reg(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("upper_gamma_reg: a must be positive");
  if (!(x >= 0.0)) throw std::domain_error("upper_gamma_reg: real x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - std::exp(log_poisson_weight(a, x)) * p_series(a, x);
  return a * std::exp(log_poisson_weight(a, x)) * q_contfrac(a, x);
}

double lower_gamma_reg(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("lower_gamma_reg: a must be positive");
  if (!(x >= 0.0)) throw std::domain_error("lower_gamma_reg: real x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return std::exp(log_poisson_weight(a, x)) * p_series(a, x);
  return 1.0 - upper_gamma_reg(a, x);
}

Complex upper_gamma_reg(double a, Complex x) { return upper_gamma_scaled(a, x).value(); }

std::vector<double> upper_gamma_reg_ladder(int m_max, double x) {
  if (m_max < 0) throw std::invalid_argument("upper_gamma_reg_ladder: m_max < 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("upper_gamma_reg_ladder: x >= 0 required");
  std::vector<double> q(m_max + 1, 1.0);
  if (x == 0.0 || m_max == 0) return q;
  // Poisson weights p_i = x^i e^{-x} / i!, seeded at the mode and filled by
  // the two-sided recurrence.
  const int top = m_max - 1;
  const int mode = static_cast<int>(std::min<double>(std::floor(x), top));
  std::vector<double> p(top + 1, 0.0);
  p[mode] = std::exp(log_poisson_weight(mode, x));
  for (int i = mode + 1; i <= top; ++i) p[i] = p[i - 1] * x / i;
  for (int i = mode - 1; i >= 0; --i) p[i] = p[i + 1] * (i + 1) / x;
  double acc = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    acc += p[m - 1];
    q[m] = acc;
  }
  return q;
}

ScaledComplex trunc_exp_scaled(int n, Complex x) {
  if (n < 0) throw std::invalid_argument("trunc_exp: n must be >= 0");
  if (x == Complex(0.0)) return {1.0, 0.0};
  if (std::abs(x) > n + 1.0) {
    // E_n(x) = x^n/n! * sum_i n!/(n-i)! x^{-i}
    Complex s = 1.0, t = 1.0;
    for (int i = 1; i <= n; ++i) {
      t *= static_cast<double>(n - i + 1) / x;
      s += t;
    }
    const Complex l = static_cast<double>(n) * std::log(x) - std::lgamma(n + 1.0);
    return make_scaled(l, s);
  }
  const ScaledComplex q = upper_gamma_scaled(n + 1.0, x);
  return {q.mantissa * std::exp(Complex(0.0, x.imag())), q.log_scale + x.real()};
}

Complex trunc_exp(int n, Complex x) { return trunc_exp_scaled(n, x).value(); }

Complex log_trunc_exp(int n, Complex x) { return trunc_exp_scaled(n, x).log(); }

Complex owen_t_imag(Complex x, double b) {
  if (!(std::abs(b) < 1.0)) throw std::domain_error("owen_t_imag: |b| < 1 required");
  const Complex h = 0.5 * x * x;
  const Complex integral = quad::adaptive(
      [&](double u) {
        const double v = 1.0 - u * u;
        return std::exp(-h * v) / v;
      },
      0.0, b, 1e-14);
  return Complex(0.0, 1.0) * integral / (2.0 * std::numbers::pi);
}

Complex owen_t_imag(double x, double b) {
  if (!(std::abs(b) < 1.0)) throw std::domain_error("owen_t_imag: |b| < 1 required");
  const double h = 0.5 * x * x;
  const Complex integral = quad::adaptive(
      [&](double u) {
        const double v = 1.0 - u * u;
        return Complex(std::exp(-h * v) / v, 0.0);
      },
      0.0, b, 1e-14);
  return {0.0, integral.real() / (2.0 * std::numbers::pi)};
}

double gauss_2f1_half(double a, double b, double c) {
  if (c <= 0.0 && c == std::floor(c)) throw std::domain_error("gauss_2f1_half: c is a non-positive integer");
  double sum = 1.0, term = 1.0;
  for (int n = 0; n < kMaxIter; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * 0.5;
    sum += term;
    if (std::abs(term) < 1e-15 * std::abs(sum)) return sum;
  }
  throw std::runtime_error("gauss_2f1_half: series did not converge");
}

}  // namespace rmt
