#pragma once

#include <functional>
#include <vector>

#include "rmt/montecarlo.hpp"
#include "rmt/specfun.hpp"
#include "rmt/types.hpp"

namespace rmt {

enum class GroupKind { unitary, unitary_symplectic, orthogonal };

struct HaarGroup {
  GroupKind kind = GroupKind::unitary;
  int k = 1;
  int dim() const { return kind == GroupKind::unitary ? k : 2 * k; }
};

// Saddle-point group of the bulk limit: U(k) for A, USp(2k) for AI, O(2k) for AII.
HaarGroup bulk_group(EnsembleClass cls, int k);

// Haar-distributed element. U(k) and O(2k) by QR of a Gaussian matrix with the
// diagonal of R made positive; USp(2k) by Gram-Schmidt on a quaternion
// Gaussian matrix, filling each column pair from the quaternion structure.
CMatrix haar_sample(const HaarGroup& g, Philox& gen);

// Symplectic form preserved by USp(2k) in the 2x2-block convention: diag([[0,1],[-1,0]]).
CMatrix symplectic_form(int k);

// Doubling used to write all classes on 2k x 2k matrices: v -> v (x) (1, 1),
// U~ -> U~ (x) 1_2. In this interleaved convention diag(chi, chi) commutes with
// the quaternion structure.
CVector doubled_source(const std::vector<Complex>& v);
CMatrix embed_doubled(const CMatrix& u);
MatrixSpace edge_space(EnsembleClass cls);

// (1/2) Tr(X U^dagger Y U) for diagonal X, Y (given as vectors of length 2k).
Complex bulk_exponent(const CVector& x, const CVector& y, const CMatrix& u);

// e^{-Tr chi eta*} E_U[exp((1/2) Tr(diag(chi,chi) U^dagger diag(eta*,eta*) U))]
// over the class's bulk group (class A uses U = U~ (x) 1_2).
McEstimate bulk_group_integral(EnsembleClass cls, int k, const std::vector<Complex>& chi,
                               const std::vector<Complex>& eta_star, std::uint64_t n, RngStream rng,
                               const McOptions& opt = {});

// Class-A closed form: prod_{j<k} j! e^{-Tr chi eta*} det[e^{chi_a eta*_b}] / (Delta(chi) Delta(eta*)).
Complex hciz_bulk_a(int k, const std::vector<Complex>& chi, const std::vector<Complex>& eta_star);

// Delta(v) = prod_{a<b} (v_b - v_a).
Complex vandermonde(const std::vector<Complex>& v);

// Exponent of the edge matrix integral at A (native space of the class):
// complex k x k : -sqrt2 z0* Tr(A^dag A chi) - sqrt2 z0 Tr(A A^dag eta*) - Tr(A^dag A)^2
// 2k x 2k       : -(z0*/sqrt2) Tr(A^dag A X) - (z0/sqrt2) Tr(A A^dag Y) - (1/2) Tr(A^dag A)^2
Complex edge_source_exponent(MatrixSpace space, const CMatrix& a, const std::vector<Complex>& chi,
                             const std::vector<Complex>& eta_star, Complex z0);
Complex edge_action(MatrixSpace space, const CMatrix& a, const std::vector<Complex>& chi,
                    const std::vector<Complex>& eta_star, Complex z0);

// Normalization Z~_k = int exp(-(1/2) Tr(A^dag A)^2) [dA] / D_edge(0)^k (closed forms).
double ztilde(EnsembleClass cls, int k);

// Edge k-pair limit by Monte Carlo over the class's matrix space, divided by
// Z~_k prod_j exp(u_j^2 / 2) D_edge(u_j / sqrt2), u_j = z0* chi_j + z0 eta*_j.
McEstimate edge_matrix_integral(EnsembleClass cls, int k, const std::vector<Complex>& chi,
                                const std::vector<Complex>& eta_star, Complex z0, std::uint64_t n,
                                RngStream rng, const MatrixIntegralOptions& opt = {});

// Class-A edge closed form (|z0| = 1).
Complex edge_closed_a(int k, const std::vector<Complex>& chi, const std::vector<Complex>& eta_star, Complex z0);

// Ratio < prod det(z_j - J) det(w*_j - J*) > / < |det(sqrt(d_N) s z0 - J)|^{2k} > via the
// k-dimensional dual integral (shared samples for numerator and denominator).
// Class AI evaluates the half-integer power as Pf(G)^N of the 4k x 4k skew
// matrix G, which fixes the branch.
McEstimate duality_finite_n(EnsembleClass cls, int n, int k, const std::vector<Complex>& z,
                            const std::vector<Complex>& w_star, Complex z0, std::uint64_t samples,
                            RngStream rng, const McOptions& opt = {});

// Class A, exact: prod_{i=N}^{N+k-1} i! det[E_{N+k-1}(z_a w*_b)] / (Delta(Z) Delta(W*)).
ScaledComplex op_kernel_formula_scaled(int n, const std::vector<Complex>& z, const std::vector<Complex>& w_star);
Complex op_kernel_formula(int n, int k, const std::vector<Complex>& z, const std::vector<Complex>& w_star);

// Class-A bulk ratio at finite N from op_kernel_formula, with z_j = sqrt(N) z0 + chi_j,
// w*_j = sqrt(N) z0* + eta*_j, normalized by the product of k = 1 values and by its
// value at chi = eta* = 0. Tends to hciz_bulk_a as N grows.
Complex kernel_bulk_ratio(int n, Complex z0, const std::vector<Complex>& chi, const std::vector<Complex>& eta_star);

enum class Regime { bulk, edge };

struct SpectralFrame {
  Complex z0 = 0.0;
  std::vector<Complex> chi;
  std::vector<Complex> eta_star;
};

struct LagrangianTerms {
  Complex divergent;  // sqrt(d_N) Tr(z0* chi + z0 eta*)
  Complex finite;
};

// point: group element (bulk) or matrix A (edge), 2k x 2k in the doubled
// convention; class A also accepts the k x k form, which is embedded.
LagrangianTerms lagrangian_eval(Regime regime, EnsembleClass cls, const SpectralFrame& frame, const CMatrix& point,
                                int d_n);

// Limit of f at coincident points: shifts v_j by h j for h = eps, eps/2, eps/4
// (eps = 1e-3 max(1, |v|)) and Richardson-extrapolates to h = 0. Only vectors
// with coincident entries are shifted. Throws std::runtime_error when the
// extrapolation does not settle.
ScaledComplex confluent_limit(
    const std::vector<Complex>& a, const std::vector<Complex>& b,
    const std::function<ScaledComplex(const std::vector<Complex>&, const std::vector<Complex>&)>& f);
bool has_coincident(const std::vector<Complex>& v);

}  // namespace rmt
