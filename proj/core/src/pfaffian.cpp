#include <cmath>
#include <stdexcept>

#include "rmt/specfun.hpp"

namespace rmt {
namespace {

template <typename Mat>
void check_skew(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("pfaffian: matrix is not square");
  if (m.rows() % 2 != 0) throw std::invalid_argument("pfaffian: odd dimension");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double skew = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (skew > 1e-12 * scale) throw std::invalid_argument("pfaffian: matrix is not skew-symmetric");
}

// Skew Parlett-Reid: A = P L T L^T P^T with T tridiagonal, column by column
// in steps of two. Pf(A) = det(P) * prod T(k, k+1).
template <typename Mat>
typename Mat::Scalar pfaffian_ltl(Mat a) {
  using S = typename Mat::Scalar;
  const Eigen::Index n = a.rows();
  S pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == S(0)) return S(0);
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index r = n - k - 2;
      const auto tau = (a.row(k).tail(r) / a(k, k + 1)).transpose().eval();
      const auto col = a.col(k + 1).tail(r).eval();
      a.bottomRightCorner(r, r) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

}  // namespace

Complex pfaffian(const CMatrix& m) {
  if (m.rows() == 0 && m.cols() == 0) return 1.0;
  check_skew(m);
  return pfaffian_ltl(m);
}

double pfaffian(const RMatrix& m) {
  if (m.rows() == 0 && m.cols() == 0) return 1.0;
  check_skew(m);
  return pfaffian_ltl(m);
}

}  // namespace rmt
