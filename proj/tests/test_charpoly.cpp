#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "oracles.hpp"
#include "rmt/charpoly.hpp"

using namespace rmt;
using oracle::mpc;
using oracle::mpf;

namespace {

// f_N(x) as an exact polynomial: binomial expansion of the double integral
// with int u^b e^{-u} du = b!.
mpc f_poly_mp(int n, Complex x) {
  const mpc xm = oracle::to_mp(x);
  mpc total = 0;
  for (int a = 0; a <= n; ++a) {
    const int m = 2 * (n - a);
    mpc inner = 0;
    for (int b = 0; b <= m; ++b)
      inner += mpf(boost::math::binomial_coefficient<double>(m, b)) * pow(2 * xm, m - b) * oracle::factorial(b);
    total += mpf(boost::math::binomial_coefficient<double>(n, a)) * pow(4 * xm, a) * oracle::factorial(a) * inner;
  }
  return total;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(DnOrigin, Examples) {
  EXPECT_DOUBLE_EQ(dn_origin(EnsembleClass::A, 3), 6.0);
  EXPECT_DOUBLE_EQ(dn_origin(EnsembleClass::AI, 1), 1.0);
  EXPECT_DOUBLE_EQ(dn_origin(EnsembleClass::AII, 1), 0.5);
  EXPECT_DOUBLE_EQ(dn_origin(EnsembleClass::AI, 4), 24.0 * 5.0 / 16.0);
  EXPECT_DOUBLE_EQ(dn_origin(EnsembleClass::AII, 3), 720.0 / 64.0);
}

TEST(DnOrigin, LogDomain) {
  for (EnsembleClass c : kAllClasses)
    for (int n : {1, 7, 30, 80}) EXPECT_NEAR(log_dn_origin(c, n), std::log(dn_origin(c, n)), 1e-12 * n);
  EXPECT_THROW(dn_origin(EnsembleClass::A, 200), std::overflow_error);
  EXPECT_TRUE(std::isfinite(log_dn_origin(EnsembleClass::AII, 10000)));
  EXPECT_NEAR(log_dn_origin(EnsembleClass::A, 10000), std::lgamma(10001.0), 1e-9 * std::lgamma(10001.0));
}

TEST(DnPair, HandMomentsAtOne) {
  EXPECT_NEAR(std::abs(dn_pair(EnsembleClass::A, 1, 1.0).normalized - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(dn_pair(EnsembleClass::AI, 1, 1.0).normalized - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(dn_pair(EnsembleClass::AII, 1, 1.0).normalized - 7.0), 0.0, 1e-14);
}

TEST(DnPair, NEqualsOneClosedForms) {
  for (Complex x : {Complex(0.0), Complex(0.7, -0.2), Complex(-3.0, 1.0), Complex(12.0, 5.0)}) {
    const Complex a = 1.0 + x;
    const Complex aii = (x * x + 2.0 * x + 0.5) / 0.5;
    EXPECT_LT(std::abs(dn_pair(EnsembleClass::A, 1, x).normalized - a), 1e-12 * std::abs(a));
    EXPECT_LT(std::abs(dn_pair(EnsembleClass::AI, 1, x).normalized - a), 1e-12 * std::abs(a));
    EXPECT_LT(std::abs(dn_pair(EnsembleClass::AII, 1, x).normalized - aii), 1e-12 * std::abs(aii));
  }
}

TEST(DnPair, MatchesTruncatedExponentialForms) {
  for (EnsembleClass c : kAllClasses)
    for (int n : {1, 2, 4, 8, 20, 60})
      for (Complex x : {Complex(0.5, 0.0), Complex(-2.0, 1.5), Complex(3.0, -4.0), Complex(0.0, 2.0),
                        Complex(15.0, 0.0), Complex(-9.0, 0.0)}) {
        double cond = 1.0;
        const Complex ref = oracle::normalized_pair(c, n, x, cond);
        const double tol = 1e-12 + 1e-14 * cond;
        const CharPolyValue v = dn_pair(c, n, x);
        EXPECT_LT(rel(v.normalized, ref), tol) << class_name(c) << " n=" << n << " x=" << x << " cond=" << cond;
        EXPECT_LT(rel(v.raw, ref * dn_origin(c, n)), tol);
        const double cx = c == EnsembleClass::A ? 1.0 : 2.0;
        EXPECT_LT(rel(v.reduced, std::exp(-cx * x) * ref), tol);
        EXPECT_NEAR(v.log_scale, std::log(std::abs(ref * dn_origin(c, n))), 1e-11 * std::max(1.0, std::abs(v.log_scale)));
        EXPECT_TRUE(v.representable);
      }
}

TEST(DnPair, LargeNLeavesRangeGracefully) {
  const CharPolyValue v = dn_pair(EnsembleClass::A, 400, 400.0);
  EXPECT_FALSE(v.representable);
  EXPECT_TRUE(std::isfinite(v.log_scale));
  // reduced channel stays O(1) at the edge: e^{-N} E_N(N) -> 1/2
  EXPECT_NEAR(v.reduced.real(), 0.5, 0.03);
}

TEST(FnSum, Examples) {
  for (int n : {1, 2, 5, 10}) EXPECT_LT(rel(f_n_sum(n, 0.0), std::tgamma(2.0 * n + 1)), 1e-13);
  EXPECT_LT(rel(f_n_sum(1, 1.0), 14.0), 1e-14);
  EXPECT_LT(rel(f_n_sum(3, 0.7), f_n_quad(3, 0.7)), 1e-8);
}

TEST(FnSum, MatchesExactPolynomial) {
  for (int n : {1, 2, 3, 6, 10, 25})
    for (Complex x : {Complex(0.3), Complex(2.0), Complex(5.0), Complex(1.0, 2.0), Complex(-0.8, 0.4)}) {
      const Complex ref = oracle::to_d(f_poly_mp(n, x));
      EXPECT_LT(rel(f_n_sum(n, x), ref), 1e-11) << n << " " << x;
      EXPECT_NEAR(log_f_n_sum(n, x).real(), std::log(std::abs(ref)), 1e-11 * std::max(1.0, std::log(std::abs(ref))));
    }
}

TEST(FnQuad, Examples) {
  EXPECT_NEAR(f_n_quad(1, 0.0), 2.0, 1e-12);
  EXPECT_NEAR(f_n_quad(1, 1.0), 14.0, 1e-9);
  EXPECT_LT(std::abs(f_n_quad(5, 2.0) - f_n_sum(5, 2.0).real()) / f_n_quad(5, 2.0), 1e-8);
}

TEST(FnQuad, AgreesWithSumOnGrid) {
  for (int n = 1; n <= 10; ++n)
    for (double x = 0.0; x <= 5.0; x += 0.5) {
      const double q = f_n_quad(n, x);
      EXPECT_LT(std::abs(q - f_n_sum(n, x).real()) / q, 1e-8) << n << " " << x;
      EXPECT_LT(std::abs(q - oracle::to_d(f_poly_mp(n, x)).real()) / q, 1e-8);
    }
}

TEST(FnSum, TiesToSelfDualPair) {
  for (int n : {1, 3, 8})
    for (Complex x : {Complex(0.4), Complex(1.2, -0.6)}) {
      const Complex lhs = dn_pair(EnsembleClass::AII, n, x).normalized * dn_origin(EnsembleClass::AII, n);
      const Complex rhs = f_n_sum(n, x) / std::pow(4.0, n);
      EXPECT_LT(rel(lhs, rhs), 1e-10);
    }
}

TEST(RescaledF, Examples) {
  for (EnsembleClass c : kAllClasses)
    for (int n : {1, 10, 50}) EXPECT_NEAR(rescaled_f(c, n, 0.0), 1.0, 1e-13);
  EXPECT_NEAR(rescaled_f(EnsembleClass::AI, 50, 0.5), 0.7549, 5e-5);
  EXPECT_NEAR(rescaled_f(EnsembleClass::AI, 50, 0.5), 0.75, 0.005);
  EXPECT_NEAR(rescaled_f(EnsembleClass::AII, 50, 0.5), 4.0 / 3.0, 0.05);
}

TEST(RescaledF, MatchesIncompleteGammaForms) {
  using boost::math::gamma_q;
  for (int n : {5, 20, 50})
    for (double r : {0.3, 0.9, 1.0, 1.2}) {
      const double nr2 = n * r * r;
      const double a = gamma_q(n + 1.0, nr2);
      const double ai = a - nr2 / (n + 1.0) * gamma_q(static_cast<double>(n), nr2);
      double aii = 0.0;
      for (int j = 0; j <= n; ++j) {
        const double lc = std::lgamma(n + 1.0) + std::lgamma(2.0 * n - 2 * j + 1) - std::lgamma(2.0 * n + 1) -
                          std::lgamma(n - j + 1.0);
        aii += std::exp(lc + j * std::log(4.0 * nr2)) * gamma_q(2.0 * n - 2 * j + 1, 2.0 * nr2);
      }
      EXPECT_NEAR(rescaled_f(EnsembleClass::A, n, r), a, 1e-12);
      EXPECT_NEAR(rescaled_f(EnsembleClass::AI, n, r), ai, 1e-12);
      EXPECT_LT(std::abs(rescaled_f(EnsembleClass::AII, n, r) - aii) / aii, 1e-11);
    }
}

TEST(Ode, Examples) {
  EXPECT_LT(ode_residual(1, 0.5), 1e-10);
  EXPECT_LT(ode_residual(10, 3.0), 1e-9);
  EXPECT_LT(ode_residual(50, 45.0), 1e-8);
}

TEST(Ode, ResidualAcrossGrid) {
  for (int n : {1, 2, 5, 10, 20, 35, 50})
    for (double x = 0.1; x <= 2.0 * n; x += (2.0 * n - 0.1) / 9.0) EXPECT_LT(ode_residual(n, x), 1e-8) << n << " " << x;
}
