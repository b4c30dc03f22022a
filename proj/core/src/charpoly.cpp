#include "rmt/charpoly.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rmt/quadrature.hpp"

namespace rmt {
namespace {

constexpr double kMaxLog = 709.0;

void check_n(int n) {
  if (n < 1) throw std::invalid_argument("N must be positive");
}

// Accumulates a sum of scaled terms without leaving double range.
class ScaledSum {
 public:
  void add(const ScaledComplex& t) {
    if (t.mantissa == Complex(0.0)) return;
    if (empty_) {
      acc_ = t;
      empty_ = false;
      return;
    }
    if (t.log_scale > acc_.log_scale) {
      acc_.mantissa = acc_.mantissa * std::exp(acc_.log_scale - t.log_scale) + t.mantissa;
      acc_.log_scale = t.log_scale;
    } else {
      acc_.mantissa += t.mantissa * std::exp(t.log_scale - acc_.log_scale);
    }
  }
  ScaledComplex result() const { return empty_ ? ScaledComplex{0.0, 0.0} : acc_; }

 private:
  ScaledComplex acc_{0.0, 0.0};
  bool empty_ = true;
};

ScaledComplex scaled_from_log(Complex l) { return {std::exp(Complex(0.0, l.imag())), l.real()}; }

ScaledComplex times(const ScaledComplex& a, Complex factor) { return {a.mantissa * factor, a.log_scale}; }

// log of the AII coefficient N! (2j)! / ((2N)! j!).
double log_aii_coeff(int n, int j) {
  return std::lgamma(n + 1.0) + std::lgamma(2.0 * j + 1.0) - std::lgamma(2.0 * n + 1.0) -
         std::lgamma(j + 1.0);
}

// sum_j N!(2j)!/((2N)! j!) (4x)^{N-j} Q(2j+1, 2x), the AII pair value with e^{2x} removed.
ScaledComplex aii_reduced(int n, Complex x) {
  ScaledSum sum;
  if (x == Complex(0.0)) return {1.0, 0.0};
  const Complex log4x = std::log(4.0 * x);
  const bool real_pos = x.imag() == 0.0 && x.real() > 0.0;
  std::vector<double> ladder;
  if (real_pos) ladder = upper_gamma_reg_ladder(2 * n + 1, 2.0 * x.real());
  for (int j = 0; j <= n; ++j) {
    const Complex l = log_aii_coeff(n, j) + static_cast<double>(n - j) * log4x;
    ScaledComplex q;
    if (real_pos) {
      q = {ladder[2 * j + 1], 0.0};
    } else {
      // Q(2j+1, 2x) = e^{-2x} E_{2j}(2x)
      const ScaledComplex e = trunc_exp_scaled(2 * j, 2.0 * x);
      q = {e.mantissa * std::exp(Complex(0.0, -2.0 * x.imag())), e.log_scale - 2.0 * x.real()};
    }
    const ScaledComplex pre = scaled_from_log(l);
    sum.add({pre.mantissa * q.mantissa, pre.log_scale + q.log_scale});
  }
  return sum.result();
}

Complex finite_or_inf(const ScaledComplex& s) {
  if (s.mantissa == Complex(0.0)) return 0.0;
  if (s.log_scale + std::log(std::abs(s.mantissa)) > kMaxLog)
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  return s.mantissa * std::exp(s.log_scale);
}

}  // namespace

double log_dn_origin(EnsembleClass cls, int n) {
  check_n(n);
  switch (cls) {
    case EnsembleClass::A: return std::lgamma(n + 1.0);
    case EnsembleClass::AI: return std::lgamma(n + 1.0) + std::log(n + 1.0) - n * std::numbers::ln2;
    case EnsembleClass::AII: return std::lgamma(2.0 * n + 1.0) - 2.0 * n * std::numbers::ln2;
  }
  return 0.0;
}

double dn_origin(EnsembleClass cls, int n) {
  check_n(n);
  if (log_dn_origin(cls, n) > kMaxLog) throw std::overflow_error("dn_origin: value exceeds double range");
  // Exact products for small N, so that N = 1..20 match factorial tables exactly.
  double v = 1.0;
  switch (cls) {
    case EnsembleClass::A:
      for (int i = 2; i <= n; ++i) v *= i;
      return v;
    case EnsembleClass::AI:
      for (int i = 2; i <= n; ++i) v *= i;
      return v * (n + 1) / std::ldexp(1.0, n);
    case EnsembleClass::AII:
      for (int i = 2; i <= 2 * n; ++i) v *= i;
      return v / std::ldexp(1.0, 2 * n);
  }
  return v;
}

CharPolyValue dn_pair(EnsembleClass cls, int n, Complex x) {
  check_n(n);
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw std::domain_error("dn_pair: non-finite x");
  ScaledComplex norm;
  Complex strip_phase;
  double strip_log = 0.0;
  switch (cls) {
    case EnsembleClass::A:
      norm = trunc_exp_scaled(n, x);
      strip_log = -x.real();
      strip_phase = std::exp(Complex(0.0, -x.imag()));
      break;
    case EnsembleClass::AI: {
      const Complex y = 2.0 * x;
      ScaledSum s;
      s.add(trunc_exp_scaled(n, y));
      s.add(times(trunc_exp_scaled(n - 1, y), -y / (n + 1.0)));
      norm = s.result();
      strip_log = -y.real();
      strip_phase = std::exp(Complex(0.0, -y.imag()));
      break;
    }
    case EnsembleClass::AII: {
      const ScaledComplex red = aii_reduced(n, x);
      norm = {red.mantissa * std::exp(Complex(0.0, 2.0 * x.imag())), red.log_scale + 2.0 * x.real()};
      strip_log = -2.0 * x.real();
      strip_phase = std::exp(Complex(0.0, -2.0 * x.imag()));
      break;
    }
  }
  CharPolyValue v;
  const ScaledComplex raw{norm.mantissa, norm.log_scale + log_dn_origin(cls, n)};
  v.normalized = finite_or_inf(norm);
  v.raw = finite_or_inf(raw);
  v.reduced = finite_or_inf({norm.mantissa * strip_phase, norm.log_scale + strip_log});
  v.log_scale = std::log(std::abs(norm.mantissa)) + raw.log_scale;
  v.representable = std::isfinite(v.raw.real()) && std::isfinite(v.normalized.real());
  return v;
}

namespace {

ScaledComplex f_n_sum_scaled(int n, Complex x) {
  check_n(n);
  ScaledSum sum;
  const bool zero = x == Complex(0.0);
  const Complex log4x = zero ? Complex(0.0) : std::log(4.0 * x);
  for (int j = 0; j <= n; ++j) {
    if (zero && j < n) continue;
    const double lc = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) + std::lgamma(2.0 * j + 1.0);
    const ScaledComplex e = trunc_exp_scaled(2 * j, 2.0 * x);
    const ScaledComplex pre = scaled_from_log(lc + static_cast<double>(n - j) * log4x);
    sum.add({pre.mantissa * e.mantissa, pre.log_scale + e.log_scale});
  }
  return sum.result();
}

}  // namespace

Complex f_n_sum(int n, Complex x) { return f_n_sum_scaled(n, x).value(); }

Complex log_f_n_sum(int n, Complex x) { return f_n_sum_scaled(n, x).log(); }

double f_n_quad(int n, double x) {
  check_n(n);
  if (!(x >= 0.0)) throw std::domain_error("f_n_quad: x >= 0 required");
  auto eval = [&](int m) {
    const quad::Rule g = quad::gauss_laguerre(m);
    long double s = 0.0L;
    for (int i = 0; i < m; ++i) {
      const double a = 2.0 * x + g.nodes[i];
      long double inner = 0.0L;
      for (int l = 0; l < m; ++l)
        inner += g.weights[l] * std::pow(static_cast<long double>(4.0 * x * g.nodes[l] + a * a), n);
      s += g.weights[i] * inner;
    }
    return static_cast<double>(s);
  };
  double prev = eval(8);
  for (int m = 16; m <= 128; m *= 2) {
    const double cur = eval(m);
    if (std::abs(cur - prev) <= 1e-10 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw std::runtime_error("f_n_quad: Gauss-Laguerre did not converge within 128 nodes");
}

double rescaled_f(EnsembleClass cls, int n, double r) {
  check_n(n);
  if (!(r >= 0.0)) throw std::domain_error("rescaled_f: r >= 0 required");
  const double t = n * r * r;
  switch (cls) {
    case EnsembleClass::A: return upper_gamma_reg(n + 1.0, t);
    case EnsembleClass::AI: {
      const auto q = upper_gamma_reg_ladder(n + 1, t);
      return q[n + 1] - t / (n + 1.0) * q[n];
    }
    case EnsembleClass::AII: {
      const auto q = upper_gamma_reg_ladder(2 * n + 1, 2.0 * t);
      double sum = 0.0;
      for (int j = 0; j <= n; ++j) {
        const double q_term = q[2 * n - 2 * j + 1];
        if (q_term == 0.0) continue;
        double lc = std::lgamma(n + 1.0) + std::lgamma(2.0 * (n - j) + 1.0) - std::lgamma(2.0 * n + 1.0) -
                    std::lgamma(n - j + 1.0);
        if (j > 0) {
          if (t == 0.0) continue;
          lc += j * std::log(4.0 * t);
        }
        sum += std::exp(lc) * q_term;
      }
      return sum;
    }
  }
  return 0.0;
}

double ode_residual(int n, double x) {
  check_n(n);
  if (!(x > 0.0)) throw std::domain_error("ode_residual: x > 0 required");
  const auto q = upper_gamma_reg_ladder(2 * n + 2, 2.0 * x);
  const double log4x = std::log(4.0 * x);
  const double lfac = std::lgamma(n + 1.0) - std::lgamma(2.0 * n + 1.0);
  double f = 0.0, df = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double lk = lfac + std::lgamma(2.0 * j + 1.0) - std::lgamma(j + 1.0) + (n - j) * log4x;
    const double term = std::exp(lk) * q[2 * j + 1];
    f += term;
    df += (n - j) / x * term;
    // derivative of Q(2j+1, 2x): 2 4^N N! / ((2N)! j!) x^{N+j} e^{-2x}
    df -= 2.0 * std::exp(2.0 * n * std::numbers::ln2 + lfac - std::lgamma(j + 1.0) + (n + j) * std::log(x) -
                         2.0 * x);
  }
  const double inhom = (2.0 * n + 1.0) * q[2 * n + 2] / (2.0 * x);
  return std::abs(df - ((2.0 * n + 1.0) / (2.0 * x) - 1.0) * f + inhom);
}

}  // namespace rmt
