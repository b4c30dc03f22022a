#include "rmt/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rmt/charpoly.hpp"
#include "rmt/specfun.hpp"

namespace rmt {
namespace {

constexpr double kSqrtPi = 1.7724538509055160;
constexpr double kSqrt2 = std::numbers::sqrt2;

}  // namespace

double global_limit(EnsembleClass cls, double r) {
  if (!(r >= 0.0)) throw std::domain_error("global_limit: r >= 0 required");
  if (r > 1.0) return 0.0;
  switch (cls) {
    case EnsembleClass::A: return 1.0;
    case EnsembleClass::AI: return 1.0 - r * r;
    case EnsembleClass::AII:
      if (r == 1.0) throw std::domain_error("global_limit: AII pole at r = 1");
      return 1.0 / (1.0 - r * r);
  }
  return 0.0;
}

double bulk_limit(EnsembleClass cls, Complex z0) {
  const double a2 = std::norm(z0);
  if (!(a2 < 1.0)) throw std::domain_error("bulk_limit: |z0| < 1 required");
  switch (cls) {
    case EnsembleClass::A: return 1.0;
    case EnsembleClass::AI: return 1.0 - a2;
    case EnsembleClass::AII: return 1.0 / (1.0 - a2);
  }
  return 0.0;
}

Complex edge_limit(EnsembleClass cls, Complex y) {
  switch (cls) {
    case EnsembleClass::A: return 0.5 * erfc_c(y);
    case EnsembleClass::AI:
      return std::exp(-y * y) / std::sqrt(2.0 * std::numbers::pi) - y / kSqrt2 * erfc_c(y);
    case EnsembleClass::AII: {
      const Complex i(0.0, 1.0);
      if (y.imag() == 0.0) {
        // e^{-y^2/2} erfi(y/sqrt2) is kept finite through the scaled erfi.
        const double yr = y.real();
        const Complex t = owen_t_imag(kSqrt2 * yr, 1.0 / kSqrt2);
        return -(kSqrtPi / 4.0) * std::erfc(yr) * erfi_scaled(yr / kSqrt2) -
               i * kSqrtPi * t * std::exp(-0.5 * yr * yr);
      }
      const Complex t = owen_t_imag(kSqrt2 * y, 1.0 / kSqrt2);
      return (-(kSqrtPi / 4.0) * erfc_c(y) * erfi(y / kSqrt2) - i * kSqrtPi * t) * std::exp(-0.5 * y * y);
    }
  }
  return 0.0;
}

double edge_tail(EnsembleClass cls, double y, TailOrder order) {
  if (y == 0.0) throw std::domain_error("edge_tail: y = 0 has no tail expansion");
  const bool next = order == TailOrder::next;
  const double y2 = y * y;
  const double g = std::exp(-y2);
  switch (cls) {
    case EnsembleClass::A: {
      const double t = g / (2.0 * kSqrtPi * y) * (next ? 1.0 - 1.0 / (2.0 * y2) : 1.0);
      if (y > 0) return t;
      return next ? 1.0 + t : 1.0;
    }
    case EnsembleClass::AI: {
      const double t = g / (std::sqrt(8.0 * std::numbers::pi) * y2);
      if (y > 0) return t * (next ? 1.0 - 3.0 / (2.0 * y2) : 1.0);
      return next ? -kSqrt2 * y + t : -kSqrt2 * y;
    }
    case EnsembleClass::AII: {
      if (y > 0) return g / (std::sqrt(8.0 * std::numbers::pi) * y2) * (next ? 1.0 - 5.0 / (2.0 * y2) : 1.0);
      const double lead = -1.0 / (kSqrt2 * y);
      return next ? lead - 1.0 / (kSqrt2 * y * y2) : lead;
    }
  }
  return 0.0;
}

double finite_n_edge(EnsembleClass cls, int n, double y) {
  if (n < 1) throw std::invalid_argument("finite_n_edge: N must be positive");
  const double d = matrix_dim(cls, n);
  const double s2 = scale(cls) * scale(cls);
  const double x = s2 * (d + std::sqrt(2.0 * d) * y + 0.5 * y * y);
  const double red = dn_pair(cls, n, x).reduced.real();
  switch (cls) {
    case EnsembleClass::A: return red;
    case EnsembleClass::AI: return std::sqrt(static_cast<double>(n)) * red;
    case EnsembleClass::AII: return red / std::sqrt(2.0 * n);
  }
  return 0.0;
}

ScanResult convergence_scan(EnsembleClass cls, double y, const std::vector<int>& n_list) {
  if (n_list.empty()) throw std::invalid_argument("convergence_scan: empty N list");
  ScanResult res;
  const double lim = edge_limit(cls, y).real();
  for (int n : n_list) {
    const double v = finite_n_edge(cls, n, y);
    res.rows.push_back({n, v, lim, std::abs(v - lim)});
  }
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    if (!(res.rows[i].error < res.rows[i - 1].error)) res.monotone = false;
  if (res.rows.size() >= 3) {
    double mx = 0, my = 0;
    const double m = static_cast<double>(res.rows.size());
    for (const auto& r : res.rows) mx += std::log(r.n) / m, my += std::log(r.error) / m;
    double sxy = 0, sxx = 0;
    for (const auto& r : res.rows) {
      const double dx = std::log(r.n) - mx;
      sxy += dx * (std::log(r.error) - my);
      sxx += dx * dx;
    }
    res.rate_exponent = sxy / sxx;
  }
  return res;
}

}  // namespace rmt
