#pragma once

#include <optional>
#include <vector>

#include "rmt/types.hpp"

namespace rmt {

// Large-N limit of rescaled_f: Theta(1-r), (1-r^2) Theta(1-r), Theta(1-r)/(1-r^2).
// At r = 1 the step takes the inside value; class AII throws std::domain_error
// there (pole).
double global_limit(EnsembleClass cls, double r);

// Bulk limit at |z0| < 1: 1, 1 - |z0|^2, 1 / (1 - |z0|^2).
double bulk_limit(EnsembleClass cls, Complex z0);

// Edge limit as a function of y = (z0* chi + z0 eta*) / sqrt(2).
//   A   : erfc(y) / 2
//   AI  : e^{-y^2} / sqrt(2 pi) - y erfc(y) / sqrt(2)
//   AII : (-(sqrt(pi)/4) erfc(y) erfi(y/sqrt 2) - i sqrt(pi) T(sqrt(2) y, i/sqrt 2)) e^{-y^2/2}
Complex edge_limit(EnsembleClass cls, Complex y);

enum class TailOrder { leading, next };
// Asymptotic tails of edge_limit for real |y| large; the sign of y picks the side.
// "next" includes the leading term plus the first correction.
double edge_tail(EnsembleClass cls, double y, TailOrder order);

// Finite-N edge quantity on the slice chi eta* = y^2/2, i.e.
// z w* = s^2 (d_N + sqrt(2 d_N) y + y^2/2):
//   A   : e^{-x} D_N / D_N(0,0)
//   AI  : sqrt(N) e^{-2x} D_N / D_N(0,0)
//   AII : e^{-2x} D_N / D_N(0,0) / sqrt(2N)
double finite_n_edge(EnsembleClass cls, int n, double y);

struct ScanRow {
  int n;
  double value;
  double limit;
  double error;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<double> rate_exponent;  // least-squares slope of log error vs log N (>= 3 points)
  bool monotone = true;                 // errors strictly decrease with N
};

ScanResult convergence_scan(EnsembleClass cls, double y, const std::vector<int>& n_list);

}  // namespace rmt
