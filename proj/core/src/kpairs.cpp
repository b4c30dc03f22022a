#include "rmt/kpairs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rmt/asymptotics.hpp"
#include "rmt/charpoly.hpp"
#include "rmt/ensembles.hpp"

namespace rmt {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void check_pair(const std::vector<Complex>& chi, const std::vector<Complex>& eta, int k, const char* who) {
  if (k < 1) throw std::invalid_argument(std::string(who) + ": k must be positive");
  if (static_cast<int>(chi.size()) != k || static_cast<int>(eta.size()) != k)
    throw std::invalid_argument(std::string(who) + ": source vectors must have length k");
}

std::string fmt_points(const std::vector<Complex>& v) {
  std::ostringstream os;
  os.precision(17);
  for (const Complex& c : v) os << '(' << c.real() << ',' << c.imag() << ')';
  return os.str();
}

ScaledComplex sc_div(const ScaledComplex& a, const ScaledComplex& b) {
  return {a.mantissa / b.mantissa, a.log_scale - b.log_scale};
}

// Rescales the moments of x by f and rebuilds the estimate.
McEstimate scale_estimate(const McEstimate& e, Complex f) {
  Moments m = e.moments;
  m.mean_x *= f;
  m.m2_x *= std::norm(f);
  m.c_xy *= f;
  McEstimate out = finalize(m, e.ratio, e.seed, e.tag);
  out.ess_fraction = e.ess_fraction;
  out.warnings = e.warnings;
  return out;
}

CMatrix tau2_blocks(int k) {
  CMatrix t = CMatrix::Zero(2 * k, 2 * k);
  for (int j = 0; j < k; ++j) {
    t(2 * j, 2 * j + 1) = Complex(0, -1);
    t(2 * j + 1, 2 * j) = Complex(0, 1);
  }
  return t;
}

CMatrix unitary_haar(int k, Philox& gen) {
  CMatrix g(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) g(r, c) = complex_normal(gen, 1.0);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(k, k);
  for (int j = 0; j < k; ++j) {
    const Complex d = qr.matrixQR()(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix orthogonal_haar(int dim, Philox& gen) {
  RMatrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = gen.normal();
  Eigen::HouseholderQR<RMatrix> qr(g);
  RMatrix q = qr.householderQ() * RMatrix::Identity(dim, dim);
  for (int j = 0; j < dim; ++j)
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  return q.cast<Complex>();
}

// Quaternion Gram-Schmidt: orthonormalize column 2j against all earlier
// columns, then its partner column is fixed by the block structure.
CMatrix symplectic_haar(int k, Philox& gen) {
  const CMatrix g = sample_gaussian_matrix(MatrixSpace::quaternion, k, 0.5, gen);
  const int n = 2 * k;
  CMatrix q = CMatrix::Zero(n, n);
  for (int j = 0; j < k; ++j) {
    CVector v = g.col(2 * j);
    for (int pass = 0; pass < 2; ++pass)
      for (int m = 0; m < 2 * j; ++m) v -= q.col(m).dot(v) * q.col(m);
    v /= v.norm();
    q.col(2 * j) = v;
    for (int i = 0; i < k; ++i) {
      q(2 * i, 2 * j + 1) = -std::conj(v(2 * i + 1));
      q(2 * i + 1, 2 * j + 1) = std::conj(v(2 * i));
    }
  }
  return q;
}

// Non-degenerate part of the class-A kernel formula, rows rescaled to keep
// the determinant in range.
ScaledComplex op_kernel_core(int n, const std::vector<Complex>& z, const std::vector<Complex>& w) {
  const int k = static_cast<int>(z.size());
  const int order = n + k - 1;
  CMatrix m(k, k);
  double total = 0.0;
  for (int a = 0; a < k; ++a) {
    std::vector<ScaledComplex> row(k);
    double top = -INFINITY;
    for (int b = 0; b < k; ++b) {
      row[b] = trunc_exp_scaled(order, z[a] * w[b]);
      if (row[b].mantissa != 0.0) top = std::max(top, row[b].log_scale);
    }
    if (!std::isfinite(top)) top = 0.0;
    for (int b = 0; b < k; ++b) m(a, b) = row[b].mantissa * std::exp(row[b].log_scale - top);
    total += top;
  }
  for (int i = n; i < n + k; ++i) total += std::lgamma(i + 1.0);
  const Complex det = k == 1 ? m(0, 0) : m.partialPivLu().determinant();
  return {det / (vandermonde(z) * vandermonde(w)), total};
}

Complex edge_closed_core(int k, const std::vector<Complex>& chi, const std::vector<Complex>& eta, Complex z0) {
  const Complex z0c = std::conj(z0);
  CMatrix num(k, k);
  Complex den = vandermonde(chi) * vandermonde(eta);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      num(a, b) = erfc_c((z0c * chi[a] + z0 * eta[b]) / kSqrt2) * std::exp(chi[a] * eta[b]);
  for (int j = 0; j < k; ++j) den *= erfc_c((z0c * chi[j] + z0 * eta[j]) / kSqrt2) * std::exp(chi[j] * eta[j]);
  RMatrix g(k, k);
  for (int a = 1; a <= k; ++a)
    for (int b = 1; b <= k; ++b) g(a - 1, b - 1) = std::tgamma((a + b - 1) / 2.0);
  double pre = 1.0;
  for (int j = 0; j < k; ++j) pre *= std::ldexp(std::sqrt(std::numbers::pi), -j) * std::pow(std::tgamma(j + 1.0), 2);
  pre /= g.determinant();
  const Complex det = k == 1 ? num(0, 0) : num.partialPivLu().determinant();
  return pre * det / den;
}

Complex hciz_core(int k, const std::vector<Complex>& chi, const std::vector<Complex>& eta) {
  CMatrix m(k, k);
  Complex trace = 0.0;
  for (int j = 0; j < k; ++j) trace += chi[j] * eta[j];
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) m(a, b) = std::exp(chi[a] * eta[b] - trace / static_cast<double>(k));
  double fact = 1.0;
  for (int j = 1; j < k; ++j) fact *= std::tgamma(j + 1.0);
  const Complex det = k == 1 ? m(0, 0) : m.partialPivLu().determinant();
  return fact * det / (vandermonde(chi) * vandermonde(eta));
}

std::vector<Complex> doubled_vec(const std::vector<Complex>& v) {
  std::vector<Complex> out;
  out.reserve(2 * v.size());
  for (const Complex& c : v) {
    out.push_back(c);
    out.push_back(c);
  }
  return out;
}

}  // namespace

HaarGroup bulk_group(EnsembleClass cls, int k) {
  if (k < 1) throw std::invalid_argument("bulk_group: k must be positive");
  switch (cls) {
    case EnsembleClass::A: return {GroupKind::unitary, k};
    case EnsembleClass::AI: return {GroupKind::unitary_symplectic, k};
    case EnsembleClass::AII: return {GroupKind::orthogonal, k};
  }
  return {};
}

CMatrix haar_sample(const HaarGroup& g, Philox& gen) {
  if (g.k < 1) throw std::invalid_argument("haar_sample: k must be positive");
  switch (g.kind) {
    case GroupKind::unitary: return unitary_haar(g.k, gen);
    case GroupKind::unitary_symplectic: return symplectic_haar(g.k, gen);
    case GroupKind::orthogonal: return orthogonal_haar(2 * g.k, gen);
  }
  return {};
}

CMatrix symplectic_form(int k) {
  CMatrix j = CMatrix::Zero(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    j(2 * i, 2 * i + 1) = 1.0;
    j(2 * i + 1, 2 * i) = -1.0;
  }
  return j;
}

CVector doubled_source(const std::vector<Complex>& v) {
  const std::vector<Complex> d = doubled_vec(v);
  return Eigen::Map<const CVector>(d.data(), static_cast<Eigen::Index>(d.size()));
}

CMatrix embed_doubled(const CMatrix& u) {
  const Eigen::Index k = u.rows();
  CMatrix out = CMatrix::Zero(2 * k, 2 * u.cols());
  for (Eigen::Index r = 0; r < k; ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      out(2 * r, 2 * c) = u(r, c);
      out(2 * r + 1, 2 * c + 1) = u(r, c);
    }
  return out;
}

MatrixSpace edge_space(EnsembleClass cls) {
  switch (cls) {
    case EnsembleClass::A: return MatrixSpace::complex;
    case EnsembleClass::AI: return MatrixSpace::quaternion;
    case EnsembleClass::AII: return MatrixSpace::real;
  }
  return MatrixSpace::complex;
}

Complex bulk_exponent(const CVector& x, const CVector& y, const CMatrix& u) {
  if (u.rows() != u.cols() || u.rows() != x.size() || x.size() != y.size())
    throw std::invalid_argument("bulk_exponent: shape mismatch");
  // Tr(X U^dag Y U) = sum_ab X_a Y_b |U_ba|^2
  Complex s = 0.0;
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    Complex col = 0.0;
    for (Eigen::Index b = 0; b < y.size(); ++b) col += y(b) * std::norm(u(b, a));
    s += x(a) * col;
  }
  return 0.5 * s;
}

McEstimate bulk_group_integral(EnsembleClass cls, int k, const std::vector<Complex>& chi,
                               const std::vector<Complex>& eta_star, std::uint64_t n, RngStream rng,
                               const McOptions& opt) {
  check_pair(chi, eta_star, k, "bulk_group_integral");
  const HaarGroup g = bulk_group(cls, k);
  const CVector x = doubled_source(chi), y = doubled_source(eta_star);
  Complex trace = 0.0;
  for (int j = 0; j < k; ++j) trace += chi[j] * eta_star[j];
  const ChunkKernel kernel = [&](Philox& gen, std::uint64_t count, Moments& acc) {
    for (std::uint64_t i = 0; i < count; ++i) {
      CMatrix u = haar_sample(g, gen);
      if (g.kind == GroupKind::unitary) u = embed_doubled(u);
      acc.push(std::exp(bulk_exponent(x, y, u) - trace));
    }
  };
  const std::string tag = "bulk_group class=" + std::string(class_name(cls)) + " k=" + std::to_string(k) +
                          " chi=" + fmt_points(chi) + " eta=" + fmt_points(eta_star);
  return finalize(run_chunks(n, rng, opt, tag, kernel), false, rng, tag);
}

Complex vandermonde(const std::vector<Complex>& v) {
  Complex p = 1.0;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b) p *= v[b] - v[a];
  return p;
}

bool has_coincident(const std::vector<Complex>& v) {
  double mag = 1.0;
  for (const Complex& c : v) mag = std::max(mag, std::abs(c));
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a + 1; b < v.size(); ++b)
      if (std::abs(v[b] - v[a]) < 1e-9 * mag) return true;
  return false;
}

ScaledComplex confluent_limit(
    const std::vector<Complex>& a, const std::vector<Complex>& b,
    const std::function<ScaledComplex(const std::vector<Complex>&, const std::vector<Complex>&)>& f) {
  const bool da = has_coincident(a), db = has_coincident(b);
  if (!da && !db) return f(a, b);
  constexpr double eps = 1e-3;
  auto shifted = [](std::vector<Complex> v, double h, bool on) {
    if (on)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += h * static_cast<double>(j);
    return v;
  };
  ScaledComplex s[3];
  for (int i = 0; i < 3; ++i) {
    const double h = std::ldexp(eps, -i);
    s[i] = f(shifted(a, h, da), shifted(b, h, db));
  }
  const double ref = s[2].log_scale;
  Complex m[3];
  for (int i = 0; i < 3; ++i) m[i] = s[i].mantissa * std::exp(s[i].log_scale - ref);
  const Complex r1a = 2.0 * m[1] - m[0], r1b = 2.0 * m[2] - m[1];
  const Complex r2 = (4.0 * r1b - r1a) / 3.0;
  if (!std::isfinite(std::abs(r2)) || std::abs(r2 - r1b) > 1e-4 * std::abs(r2))
    throw std::runtime_error("confluent_limit: coincident points, extrapolation did not settle");
  return {r2, ref};
}

Complex hciz_bulk_a(int k, const std::vector<Complex>& chi, const std::vector<Complex>& eta_star) {
  check_pair(chi, eta_star, k, "hciz_bulk_a");
  return confluent_limit(chi, eta_star,
                         [k](const std::vector<Complex>& a, const std::vector<Complex>& b) {
                           return ScaledComplex{hciz_core(k, a, b), 0.0};
                         })
      .value();
}

Complex edge_source_exponent(MatrixSpace space, const CMatrix& a, const std::vector<Complex>& chi,
                             const std::vector<Complex>& eta_star, Complex z0) {
  const int k = static_cast<int>(chi.size());
  const int dim = representation_dim(space, k);
  if (a.rows() != dim || a.cols() != dim || static_cast<int>(eta_star.size()) != k)
    throw std::invalid_argument("edge_source_exponent: shape mismatch");
  const bool native = space == MatrixSpace::complex;
  const double coef = native ? kSqrt2 : 1.0 / kSqrt2;
  Complex sx = 0.0, sy = 0.0;
  for (int i = 0; i < dim; ++i) {
    const int j = native ? i : i / 2;
    sx += chi[j] * a.col(i).squaredNorm();  // (A^dag A)_ii
    sy += eta_star[j] * a.row(i).squaredNorm();  // (A A^dag)_ii
  }
  return -coef * (std::conj(z0) * sx + z0 * sy);
}

Complex edge_action(MatrixSpace space, const CMatrix& a, const std::vector<Complex>& chi,
                    const std::vector<Complex>& eta_star, Complex z0) {
  return edge_source_exponent(space, a, chi, eta_star, z0) - quartic_form(space, a);
}

double ztilde(EnsembleClass cls, int k) {
  if (k < 1) throw std::invalid_argument("ztilde: k must be positive");
  const double pi = std::numbers::pi;
  const double kk = static_cast<double>(k) * k;
  auto gam = [](int a, int b) { return std::tgamma((a + b - 1) / 2.0); };
  switch (cls) {
    case EnsembleClass::A: {
      RMatrix g(k, k);
      for (int a = 1; a <= k; ++a)
        for (int b = 1; b <= k; ++b) g(a - 1, b - 1) = gam(a, b);
      double den = 1.0;
      for (int j = 0; j < k; ++j) den *= std::pow(std::tgamma(j + 1.0), 2);
      return std::pow(pi, kk) / den * g.determinant();
    }
    case EnsembleClass::AI: {
      RMatrix g(2 * k, 2 * k);
      for (int a = 1; a <= 2 * k; ++a)
        for (int b = 1; b <= 2 * k; ++b) g(a - 1, b - 1) = (b - a) * gam(a, b);
      double den = 1.0;
      for (int j = 0; j < k; ++j) den *= std::pow(std::tgamma(2.0 * j + 2.0), 2);
      return std::pow(pi, 2.0 * kk) * std::pow(pi / 2.0, k / 2.0) / den * pfaffian(g);
    }
    case EnsembleClass::AII: {
      auto term = [](int a, int b) {
        return std::exp2(b / 2.0) / (2.0 * a - 1.0) *
               gauss_2f1_half((5.0 - 2.0 * b) / 4.0, (2.0 * a - 1.0) / 4.0, (2.0 * a + 3.0) / 4.0);
      };
      RMatrix g(2 * k, 2 * k);
      for (int a = 1; a <= 2 * k; ++a)
        for (int b = 1; b <= 2 * k; ++b) g(a - 1, b - 1) = a == b ? 0.0 : (term(a, b) - term(b, a)) * gam(a, b);
      double den = 1.0;
      for (int j = 0; j < k; ++j) den *= std::pow(std::tgamma(2.0 * j + 1.0), 2);
      const double per = std::sqrt(pi) / (std::pow(2.0, 1.25) * std::atanh(1.0 / kSqrt2));
      return std::pow(per, k) * std::pow(2.0 * pi, 2.0 * kk) / den * pfaffian(g);
    }
  }
  return 0.0;
}

McEstimate edge_matrix_integral(EnsembleClass cls, int k, const std::vector<Complex>& chi,
                                const std::vector<Complex>& eta_star, Complex z0, std::uint64_t n,
                                RngStream rng, const MatrixIntegralOptions& opt) {
  check_pair(chi, eta_star, k, "edge_matrix_integral");
  if (std::abs(std::abs(z0) - 1.0) > 1e-12) throw std::invalid_argument("edge_matrix_integral: |z0| must be 1");
  const MatrixSpace space = edge_space(cls);
  const MatrixIntegrand f{"edge_source z0=" + fmt_points({z0}) + " chi=" + fmt_points(chi) +
                              " eta=" + fmt_points(eta_star),
                          [&](const CMatrix& a) { return std::exp(edge_source_exponent(space, a, chi, eta_star, z0)); }};
  const McEstimate raw = estimate_matrix_integral(space, k, Weight::quartic, f, n, rng, opt);
  Complex den = ztilde(cls, k);
  for (int j = 0; j < k; ++j) {
    const Complex u = std::conj(z0) * chi[j] + z0 * eta_star[j];
    den *= std::exp(u * u / 2.0) * edge_limit(cls, u / kSqrt2);
  }
  return scale_estimate(raw, 1.0 / den);
}

Complex edge_closed_a(int k, const std::vector<Complex>& chi, const std::vector<Complex>& eta_star, Complex z0) {
  check_pair(chi, eta_star, k, "edge_closed_a");
  if (std::abs(std::abs(z0) - 1.0) > 1e-12) throw std::invalid_argument("edge_closed_a: |z0| must be 1");
  return confluent_limit(chi, eta_star,
                         [k, z0](const std::vector<Complex>& a, const std::vector<Complex>& b) {
                           return ScaledComplex{edge_closed_core(k, a, b, z0), 0.0};
                         })
      .value();
}

McEstimate duality_finite_n(EnsembleClass cls, int n, int k, const std::vector<Complex>& z,
                            const std::vector<Complex>& w_star, Complex z0, std::uint64_t samples,
                            RngStream rng, const McOptions& opt) {
  check_pair(z, w_star, k, "duality_finite_n");
  if (n < 1) throw std::invalid_argument("duality_finite_n: N must be positive");
  if (std::abs(z0) > 1.0 + 1e-12) throw std::invalid_argument("duality_finite_n: |z0| must be at most 1");
  for (const Complex& w : w_star)
    if (w == 0.0) throw std::invalid_argument("duality_finite_n: W* must be invertible");
  const int d = matrix_dim(cls, n);
  const double s = scale(cls);
  const Complex zc = std::sqrt(static_cast<double>(d)) * s * z0;  // denominator point
  const double a2 = std::norm(z0);

  std::function<void(Philox&, Complex&, Complex&)> draw;
  double log_ref;
  switch (cls) {
    case EnsembleClass::A: {
      log_ref = n * k * std::log(a2 + 1.0);
      CMatrix zw = CMatrix::Zero(k, k), w = CMatrix::Zero(k, k), winv = CMatrix::Zero(k, k);
      for (int j = 0; j < k; ++j) {
        zw(j, j) = z[j] * w_star[j] / static_cast<double>(n);
        w(j, j) = w_star[j];
        winv(j, j) = 1.0 / w_star[j];
      }
      draw = [=](Philox& gen, Complex& num, Complex& den) {
        CMatrix a(k, k);
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c) a(r, c) = complex_normal(gen, 1.0 / n);
        const CMatrix ata = a.adjoint() * a;
        num = std::exp(static_cast<double>(n) * log_det(zw + a.adjoint() * winv * a * w) - log_ref);
        den = std::exp(static_cast<double>(n) * log_det(a2 * CMatrix::Identity(k, k) + ata) - log_ref);
      };
      break;
    }
    case EnsembleClass::AI: {
      log_ref = n * k * std::log(std::norm(zc) + 1.0);
      const CMatrix t = tau2_blocks(k);
      const double g = std::sqrt(d / 2.0);
      auto build = [=](const std::vector<Complex>& zz, const std::vector<Complex>& ww, const CMatrix& a) {
        CMatrix m(4 * k, 4 * k);
        CMatrix zt = CMatrix::Zero(2 * k, 2 * k), wt = CMatrix::Zero(2 * k, 2 * k);
        for (int j = 0; j < 2 * k; ++j) {
          zt(j, j) = zz[j / 2];
          wt(j, j) = ww[j / 2];
        }
        m.topLeftCorner(2 * k, 2 * k) = zt * t;
        m.topRightCorner(2 * k, 2 * k) = Complex(0, g) * t * a.transpose();
        m.bottomLeftCorner(2 * k, 2 * k) = Complex(0, g) * a * t;
        m.bottomRightCorner(2 * k, 2 * k) = wt * t;
        return m;
      };
      const std::vector<Complex> zd(k, zc), wd(k, std::conj(zc));
      draw = [=](Philox& gen, Complex& num, Complex& den) {
        const CMatrix a = sample_gaussian_matrix(MatrixSpace::quaternion, k, d / 2.0, gen);
        num = std::exp(static_cast<double>(n) * std::log(pfaffian(build(z, w_star, a))) - log_ref);
        den = std::exp(static_cast<double>(n) * std::log(pfaffian(build(zd, wd, a))) - log_ref);
      };
      break;
    }
    case EnsembleClass::AII: {
      log_ref = n * 2 * k * std::log(a2 + 1.0);
      CMatrix zw = CMatrix::Zero(2 * k, 2 * k), w = CMatrix::Zero(2 * k, 2 * k), winv = CMatrix::Zero(2 * k, 2 * k);
      for (int j = 0; j < 2 * k; ++j) {
        zw(j, j) = 2.0 / d * z[j / 2] * w_star[j / 2];
        w(j, j) = w_star[j / 2];
        winv(j, j) = 1.0 / w_star[j / 2];
      }
      draw = [=](Philox& gen, Complex& num, Complex& den) {
        const CMatrix a = sample_gaussian_matrix(MatrixSpace::real, k, d / 2.0, gen);
        const CMatrix ata = a.adjoint() * a;
        num = std::exp(static_cast<double>(n) * log_det(zw + a.transpose() * winv * a * w) - log_ref);
        den = std::exp(static_cast<double>(n) * log_det(a2 * CMatrix::Identity(2 * k, 2 * k) + ata) - log_ref);
      };
      break;
    }
  }
  const ChunkKernel kernel = [&](Philox& gen, std::uint64_t count, Moments& acc) {
    Complex num, den;
    for (std::uint64_t i = 0; i < count; ++i) {
      draw(gen, num, den);
      acc.push(num, den);
    }
  };
  const std::string tag = "duality class=" + std::string(class_name(cls)) + " N=" + std::to_string(n) +
                          " k=" + std::to_string(k) + " z=" + fmt_points(z) + " w=" + fmt_points(w_star) +
                          " z0=" + fmt_points({z0});
  return finalize(run_chunks(samples, rng, opt, tag, kernel), true, rng, tag);
}

ScaledComplex op_kernel_formula_scaled(int n, const std::vector<Complex>& z, const std::vector<Complex>& w_star) {
  if (n < 1) throw std::invalid_argument("op_kernel_formula: N must be positive");
  if (z.empty() || z.size() != w_star.size())
    throw std::invalid_argument("op_kernel_formula: Z and W* must have the same positive length");
  return confluent_limit(z, w_star, [n](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    return op_kernel_core(n, a, b);
  });
}

Complex op_kernel_formula(int n, int k, const std::vector<Complex>& z, const std::vector<Complex>& w_star) {
  if (static_cast<int>(z.size()) != k) throw std::invalid_argument("op_kernel_formula: Z must have length k");
  return op_kernel_formula_scaled(n, z, w_star).value();
}

Complex kernel_bulk_ratio(int n, Complex z0, const std::vector<Complex>& chi, const std::vector<Complex>& eta_star) {
  const int k = static_cast<int>(chi.size());
  check_pair(chi, eta_star, k, "kernel_bulk_ratio");
  const double rn = std::sqrt(static_cast<double>(n));
  auto reduced = [n](const std::vector<Complex>& z, const std::vector<Complex>& w) {
    ScaledComplex r = op_kernel_formula_scaled(n, z, w);
    for (std::size_t j = 0; j < z.size(); ++j) {
      ScaledComplex one = trunc_exp_scaled(n, z[j] * w[j]);
      one.log_scale += std::lgamma(n + 1.0);
      r = sc_div(r, one);
    }
    return r;
  };
  std::vector<Complex> z(k), w(k);
  for (int j = 0; j < k; ++j) {
    z[j] = rn * z0 + chi[j];
    w[j] = rn * std::conj(z0) + eta_star[j];
  }
  const std::vector<Complex> z_ref(k, rn * z0), w_ref(k, rn * std::conj(z0));
  return sc_div(reduced(z, w), reduced(z_ref, w_ref)).value();
}

LagrangianTerms lagrangian_eval(Regime regime, EnsembleClass cls, const SpectralFrame& frame, const CMatrix& point,
                                int d_n) {
  const int k = static_cast<int>(frame.chi.size());
  check_pair(frame.chi, frame.eta_star, k, "lagrangian_eval");
  if (d_n < 1) throw std::invalid_argument("lagrangian_eval: d_N must be positive");
  CMatrix p = point;
  if (cls == EnsembleClass::A && p.rows() == k && p.cols() == k) p = embed_doubled(point);
  if (p.rows() != 2 * k || p.cols() != 2 * k) throw std::invalid_argument("lagrangian_eval: point shape mismatch");
  const Complex z0 = frame.z0, z0c = std::conj(z0);
  LagrangianTerms out;
  out.divergent = 0.0;
  for (int j = 0; j < k; ++j) out.divergent += z0c * frame.chi[j] + z0 * frame.eta_star[j];
  out.divergent *= std::sqrt(static_cast<double>(d_n));
  if (regime == Regime::bulk) {
    out.finite = bulk_exponent(doubled_source(frame.chi), doubled_source(frame.eta_star), p);
    return out;
  }
  Complex sq = 0.0;
  for (int j = 0; j < k; ++j) sq += std::pow(z0c * frame.chi[j], 2) + std::pow(z0 * frame.eta_star[j], 2);
  // Doubled form; for class A this is the native action evaluated on diag(A~, A~).
  out.finite = -0.5 * sq + edge_action(MatrixSpace::real, p, frame.chi, frame.eta_star, z0);
  return out;
}

}  // namespace rmt
