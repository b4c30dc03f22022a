#pragma once

#include <functional>
#include <vector>

#include "rmt/types.hpp"

namespace rmt::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on P_n.
const Rule& gauss_legendre(int n);

// Gauss-Laguerre rule for weight e^{-x} on [0, inf). Nodes from the Jacobi
// matrix eigenvalues, polished by Newton; weights from the derivative formula
// so that small weights keep their relative accuracy. Limited to n <= 160.
Rule gauss_laguerre(int n);

// Adaptive Gauss-Legendre on [a, b]: a panel is accepted when its 20-point
// estimate and the sum over its two halves agree to tol times the magnitude
// of the first whole-interval estimate. Throws std::runtime_error if the
// recursion depth is exhausted.
Complex adaptive(const std::function<Complex(double)>& f, double a, double b,
                 double tol = 1e-14, int max_depth = 40);

}  // namespace rmt::quad
