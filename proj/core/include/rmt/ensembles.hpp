#pragma once

#include <vector>

#include "rmt/rng.hpp"
#include "rmt/types.hpp"

namespace rmt {

struct MatrixSample {
  EnsembleClass cls = EnsembleClass::A;
  int n = 1;
  CMatrix entries;  // d_N x d_N
};

// Complex Gaussian with E|x|^2 = var.
Complex complex_normal(Philox& gen, double var);

// Draws one matrix with weight exp(-Tr J J^dagger) restricted to the class:
//   A   : iid entries, E|J_ij|^2 = 1
//   AI  : J = J^T, E|J_ii|^2 = 1, E|J_ij|^2 = 1/2 off the diagonal
//   AII : J = [[A, B], [C, A^T]], B and C antisymmetric, all free entries
//         with E|.|^2 = 1/2; satisfies Sigma_y J^T Sigma_y = J exactly.
MatrixSample sample(EnsembleClass cls, int n, Philox& gen);
MatrixSample sample(EnsembleClass cls, int n, RngStream rng);

// Sigma_y = [[0, -i 1_n], [i 1_n, 0]].
CMatrix sigma_y(int n);

// Eigenvalues of J / (sqrt(d_N) s) by LAPACK zgeev (Hessenberg reduction and
// shifted QR). Throws std::runtime_error if the iteration does not converge.
std::vector<Complex> scaled_eigenvalues(const MatrixSample& s);

// Keeps one member of each Kramers pair (nearest-neighbour matching).
std::vector<Complex> drop_kramers_partners(const std::vector<Complex>& ev);

struct RadialHistogram {
  double r_max = 1.5;
  double bin_width = 0.0;
  std::vector<double> fraction;  // share of all eigenvalues per bin
  double overflow = 0.0;         // share with |lambda| >= r_max
  std::size_t count = 0;         // eigenvalues counted
};

// Normalized histogram of scaled eigenvalue moduli on [0, r_max).
RadialHistogram radial_density(const std::vector<MatrixSample>& samples, int bins,
                               double r_max = 1.5, bool dedup_kramers = false);

// Share of moduli strictly above r.
double fraction_beyond(const std::vector<Complex>& ev, double r);

}  // namespace rmt
