#include "rmt/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace rmt::quad {
namespace {

Rule make_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_legendre(n)).first;
  return it->second;
}

Rule gauss_laguerre(int n) {
  if (n < 1 || n > 160) throw std::invalid_argument("gauss_laguerre: n out of range [1, 160]");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jac(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) jac(i, i + 1) = jac(i + 1, i) = i + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac, Eigen::EigenvaluesOnly);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    long double x = es.eigenvalues()(i);
    long double lm1 = 0, l = 1;
    for (int it = 0; it < 8; ++it) {
      long double l0 = 1, l1 = 1 - x;
      for (int j = 2; j <= n; ++j) {
        const long double l2 = ((2 * j - 1 - x) * l1 - (j - 1) * l0) / j;
        l0 = l1;
        l1 = l2;
      }
      l = l1;
      lm1 = l0;
      const long double d = n * (l - lm1) / x;
      const long double dx = l / d;
      x -= dx;
      if (std::fabs(static_cast<double>(dx)) < 1e-18L * (1 + x)) break;
    }
    long double l0 = 1, l1 = 1 - x;
    for (int j = 2; j <= n; ++j) {
      const long double l2 = ((2 * j - 1 - x) * l1 - (j - 1) * l0) / j;
      l0 = l1;
      l1 = l2;
    }
    const long double d = n * (l1 - l0) / x;
    r.nodes[i] = static_cast<double>(x);
    r.weights[i] = static_cast<double>(1.0L / (x * d * d));
  }
  return r;
}

namespace {

Complex panel(const std::function<Complex(double)>& f, double a, double b) {
  const Rule& g = gauss_legendre(20);
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  Complex s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(m + h * g.nodes[i]);
  return s * h;
}

// abs_tol is fixed from the first whole-interval estimate, so panels that
// contribute little are not refined to pointless relative accuracy.
Complex refine(const std::function<Complex(double)>& f, double a, double b, Complex whole,
               double abs_tol, int depth) {
  const double m = 0.5 * (a + b);
  const Complex left = panel(f, a, m), right = panel(f, m, b);
  const Complex both = left + right;
  if (std::abs(both - whole) <= abs_tol) return both;
  if (depth == 0) throw std::runtime_error("quad::adaptive: recursion depth exhausted");
  return refine(f, a, m, left, abs_tol, depth - 1) + refine(f, m, b, right, abs_tol, depth - 1);
}

}  // namespace

Complex adaptive(const std::function<Complex(double)>& f, double a, double b, double tol,
                 int max_depth) {
  if (a == b) return 0.0;
  const Complex whole = panel(f, a, b);
  const double abs_tol = tol * std::max(std::abs(whole), 1e-300);
  return refine(f, a, b, whole, abs_tol, max_depth);
}

}  // namespace rmt::quad
