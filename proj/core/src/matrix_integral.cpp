#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rmt/ensembles.hpp"
#include "rmt/montecarlo.hpp"

namespace rmt {

int representation_dim(MatrixSpace space, int k) { return space == MatrixSpace::complex ? k : 2 * k; }

double quadratic_form(const CMatrix& a) { return a.squaredNorm(); }

double quartic_form(MatrixSpace space, const CMatrix& a) {
  const CMatrix m = a.adjoint() * a;
  const double t = m.squaredNorm();  // Tr (A^dagger A)^2, m Hermitian
  return space == MatrixSpace::complex ? t : 0.5 * t;
}

CMatrix sample_gaussian_matrix(MatrixSpace space, int k, double c, Philox& gen) {
  if (k < 1) throw std::invalid_argument("sample_gaussian_matrix: k must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("sample_gaussian_matrix: c must be positive");
  switch (space) {
    case MatrixSpace::complex: {
      CMatrix a(k, k);
      for (int r = 0; r < k; ++r)
        for (int col = 0; col < k; ++col) a(r, col) = complex_normal(gen, 1.0 / c);
      return a;
    }
    case MatrixSpace::quaternion: {
      // Tr A A^dagger = 2 sum of the four real components squared.
      const double sd = std::sqrt(1.0 / (4.0 * c));
      CMatrix a(2 * k, 2 * k);
      for (int r = 0; r < k; ++r)
        for (int col = 0; col < k; ++col) {
          const double x0 = sd * gen.normal(), x1 = sd * gen.normal();
          const double x2 = sd * gen.normal(), x3 = sd * gen.normal();
          const Complex al(x0, x1), be(x2, x3);
          a(2 * r, 2 * col) = al;
          a(2 * r, 2 * col + 1) = be;
          a(2 * r + 1, 2 * col) = -std::conj(be);
          a(2 * r + 1, 2 * col + 1) = std::conj(al);
        }
      return a;
    }
    case MatrixSpace::real: {
      const double sd = std::sqrt(1.0 / (2.0 * c));
      CMatrix a(2 * k, 2 * k);
      for (int r = 0; r < 2 * k; ++r)
        for (int col = 0; col < 2 * k; ++col) a(r, col) = sd * gen.normal();
      return a;
    }
  }
  return {};
}

double gaussian_normalization(MatrixSpace space, int k, double c) {
  const double kk = static_cast<double>(k) * k;
  switch (space) {
    case MatrixSpace::complex: return std::pow(std::numbers::pi / c, kk);
    case MatrixSpace::quaternion: return std::pow(std::numbers::pi / (2.0 * c), 2.0 * kk);
    case MatrixSpace::real: return std::pow(std::numbers::pi / c, 2.0 * kk);
  }
  return 0.0;
}

McEstimate estimate_matrix_integral(MatrixSpace space, int k, Weight weight, const MatrixIntegrand& integrand,
                                    std::uint64_t n, RngStream rng, const MatrixIntegralOptions& opt) {
  if (!integrand.f) throw std::invalid_argument("estimate_matrix_integral: empty integrand");
  const double c = opt.proposal_c;
  const double z = gaussian_normalization(space, k, c);
  const bool quartic = weight == Weight::quartic;
  const ChunkKernel kernel = [&](Philox& gen, std::uint64_t count, Moments& acc) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const CMatrix a = sample_gaussian_matrix(space, k, c, gen);
      const Complex f = integrand.f(a);
      if (!quartic) {
        acc.push(z * f);
        continue;
      }
      const double w = std::exp(c * quadratic_form(a) - quartic_form(space, a));
      acc.push_weight(w);
      acc.push(z * w * f);
    }
  };
  char cbuf[64];
  std::snprintf(cbuf, sizeof cbuf, "%a", c);
  std::ostringstream tag;
  tag << "matrix_integral space=" << static_cast<int>(space) << " k=" << k << " weight=" << static_cast<int>(weight)
      << " c=" << cbuf << " f=" << integrand.name;
  const Moments m = run_chunks(n, rng, opt.mc, tag.str(), kernel);
  McEstimate e = finalize(m, false, rng, tag.str());
  if (quartic && e.ess_fraction < 0.01)
    e.warnings.push_back("importance weights degenerate: effective sample size below 1% of n");
  return e;
}

}  // namespace rmt
