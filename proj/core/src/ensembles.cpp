#include "rmt/ensembles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

// LAPACK, Fortran ABI with trailing hidden string lengths. std::complex<double>
// is layout-compatible with COMPLEX*16.
extern "C" void zgeev_(const char* jobvl, const char* jobvr, const int* n, std::complex<double>* a, const int* lda,
                       std::complex<double>* w, std::complex<double>* vl, const int* ldvl, std::complex<double>* vr,
                       const int* ldvr, std::complex<double>* work, const int* lwork, double* rwork, int* info,
                       std::size_t jobvl_len, std::size_t jobvr_len);

namespace rmt {

int matrix_dim(EnsembleClass c, int n) { return c == EnsembleClass::AII ? 2 * n : n; }

double scale(EnsembleClass c) { return c == EnsembleClass::A ? 1.0 : std::sqrt(0.5); }

std::string_view class_name(EnsembleClass c) {
  switch (c) {
    case EnsembleClass::A: return "A";
    case EnsembleClass::AI: return "AI";
    case EnsembleClass::AII: return "AII";
  }
  return "?";
}

EnsembleClass parse_class(std::string_view s) {
  std::string t(s);
  for (const char* suffix : {"\xE2\x80\xA0", "+", "dag"}) {
    const std::string suf(suffix);
    if (t.size() > suf.size() && t.compare(t.size() - suf.size(), suf.size(), suf) == 0)
      t.resize(t.size() - suf.size());
  }
  if (t == "A") return EnsembleClass::A;
  if (t == "AI") return EnsembleClass::AI;
  if (t == "AII") return EnsembleClass::AII;
  throw std::invalid_argument("unknown ensemble class: " + std::string(s));
}

Complex complex_normal(Philox& gen, double var) {
  const double sd = std::sqrt(0.5 * var);
  const double re = gen.normal();
  const double im = gen.normal();
  return {sd * re, sd * im};
}

MatrixSample sample(EnsembleClass cls, int n, Philox& gen) {
  if (n < 1) throw std::invalid_argument("sample: N must be positive");
  MatrixSample s{cls, n, CMatrix(matrix_dim(cls, n), matrix_dim(cls, n))};
  CMatrix& j = s.entries;
  switch (cls) {
    case EnsembleClass::A:
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) j(r, c) = complex_normal(gen, 1.0);
      break;
    case EnsembleClass::AI:
      for (int r = 0; r < n; ++r) {
        j(r, r) = complex_normal(gen, 1.0);
        for (int c = r + 1; c < n; ++c) j(r, c) = j(c, r) = complex_normal(gen, 0.5);
      }
      break;
    case EnsembleClass::AII: {
      j.setZero();
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          const Complex a = complex_normal(gen, 0.5);
          j(r, c) = a;
          j(n + c, n + r) = a;
        }
      for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c) {
          const Complex b = complex_normal(gen, 0.5);
          const Complex d = complex_normal(gen, 0.5);
          j(r, n + c) = b;
          j(c, n + r) = -b;
          j(n + r, c) = d;
          j(n + c, r) = -d;
        }
      break;
    }
  }
  return s;
}

MatrixSample sample(EnsembleClass cls, int n, RngStream rng) {
  Philox gen(rng);
  return sample(cls, n, gen);
}

CMatrix sigma_y(int n) {
  CMatrix s = CMatrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    s(i, n + i) = Complex(0.0, -1.0);
    s(n + i, i) = Complex(0.0, 1.0);
  }
  return s;
}

std::vector<Complex> scaled_eigenvalues(const MatrixSample& s) {
  const double f = std::sqrt(static_cast<double>(matrix_dim(s.cls, s.n))) * scale(s.cls);
  CMatrix a = s.entries / f;
  int n = static_cast<int>(a.rows());
  std::vector<Complex> w(n);
  if (n == 0) return w;
  // workspace query first, then the real call
  char no = 'N';
  int one = 1, lwork = -1, info = 0;
  Complex wq;
  std::vector<double> rwork(2 * n);
  zgeev_(&no, &no, &n, a.data(), &n, w.data(), nullptr, &one, nullptr, &one, &wq, &lwork, rwork.data(), &info, 1, 1);
  lwork = static_cast<int>(wq.real());
  std::vector<Complex> work(lwork);
  zgeev_(&no, &no, &n, a.data(), &n, w.data(), nullptr, &one, nullptr, &one, work.data(), &lwork, rwork.data(),
         &info, 1, 1);
  if (info != 0) throw std::runtime_error("scaled_eigenvalues: QR iteration did not converge");
  return w;
}

std::vector<Complex> drop_kramers_partners(const std::vector<Complex>& ev) {
  const std::size_t m = ev.size();
  std::vector<bool> used(m, false);
  std::vector<Complex> out;
  out.reserve(m / 2 + 1);
  for (std::size_t i = 0; i < m; ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::size_t best = m;
    double dmin = 0.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      if (used[j]) continue;
      const double d = std::abs(ev[j] - ev[i]);
      if (best == m || d < dmin) best = j, dmin = d;
    }
    if (best != m) used[best] = true;
    out.push_back(ev[i]);
  }
  return out;
}

RadialHistogram radial_density(const std::vector<MatrixSample>& samples, int bins, double r_max,
                               bool dedup_kramers) {
  if (bins <= 0) throw std::invalid_argument("radial_density: bins must be positive");
  if (samples.empty()) throw std::invalid_argument("radial_density: no samples");
  if (!(r_max > 0.0)) throw std::invalid_argument("radial_density: r_max must be positive");
  RadialHistogram h;
  h.r_max = r_max;
  h.bin_width = r_max / bins;
  std::vector<std::size_t> counts(bins, 0);
  std::size_t over = 0;
  for (const auto& s : samples) {
    auto ev = scaled_eigenvalues(s);
    if (dedup_kramers && s.cls == EnsembleClass::AII) ev = drop_kramers_partners(ev);
    for (const Complex& z : ev) {
      const double r = std::abs(z);
      const auto b = static_cast<std::size_t>(r / h.bin_width);
      if (r >= r_max || b >= counts.size()) ++over;
      else ++counts[b];
      ++h.count;
    }
  }
  h.fraction.resize(bins);
  for (int b = 0; b < bins; ++b) h.fraction[b] = static_cast<double>(counts[b]) / h.count;
  h.overflow = static_cast<double>(over) / h.count;
  return h;
}

double fraction_beyond(const std::vector<Complex>& ev, double r) {
  if (ev.empty()) throw std::invalid_argument("fraction_beyond: empty input");
  std::size_t c = 0;
  for (const Complex& z : ev) c += std::abs(z) > r;
  return static_cast<double>(c) / ev.size();
}

}  // namespace rmt
