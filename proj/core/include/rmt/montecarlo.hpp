#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rmt/rng.hpp"
#include "rmt/types.hpp"

namespace rmt {

// One-pass (Welford) moments of a complex sample x and an optional paired
// denominator y, merged with Chan's formula. Also carries the sums of
// importance weights needed for an effective sample size.
struct Moments {
  std::uint64_t n = 0;
  Complex mean_x = 0.0;
  Complex mean_y = 0.0;
  double m2_x = 0.0;   // sum |x - mean_x|^2
  double m2_y = 0.0;   // sum |y - mean_y|^2
  Complex c_xy = 0.0;  // sum (x - mean_x) conj(y - mean_y)
  double w1 = 0.0;     // sum of importance weights
  double w2 = 0.0;     // sum of squared importance weights

  void push(Complex x, Complex y = 1.0);
  void push_weight(double w);
  static Moments merge(const Moments& a, const Moments& b);
};

struct McEstimate {
  Complex mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  RngStream seed;
  std::string tag;     // query descriptor; merge refuses mismatched tags
  bool ratio = false;  // mean = <x>/<y>, error by the delta method
  double ess_fraction = 1.0;  // (sum w)^2 / (n sum w^2) for importance-sampled runs
  std::vector<std::string> warnings;
  Moments moments;
};

// Builds the estimate (mean, std_error) from accumulated moments.
McEstimate finalize(const Moments& m, bool ratio, RngStream seed, std::string tag);

// Pools estimates of the same query. Mismatched tags or ratio flags throw
// std::invalid_argument; the list is reduced as a balanced binary tree in
// list order, matching the reduction used inside a single run.
McEstimate merge(const std::vector<McEstimate>& estimates);

// Execution plan. Samples are processed in chunks of chunk_size; chunk c of a
// run draws from Philox(stream, first_chunk + c) and chunk results are reduced
// as a balanced tree, so the result does not depend on the worker count.
// Splitting a run of 2m chunks into two runs of m chunks (the second starting
// at first_chunk + m) and merging reproduces it bit for bit.
struct McOptions {
  int threads = 0;  // 0: RMT_THREADS if set, else hardware concurrency
  std::uint32_t first_chunk = 0;
  std::uint32_t chunk_size = 4096;
  // Optional checkpoint file. Completed chunk accumulators are flushed every
  // checkpoint_every samples and reloaded on the next run with the same tag.
  std::string checkpoint_path;
  std::uint64_t checkpoint_every = 1000000;
};

int resolve_threads(int requested);

using ChunkKernel = std::function<void(Philox& gen, std::uint64_t count, Moments& acc)>;

// Runs kernel over n samples following the plan above and returns the
// tree-reduced moments.
Moments run_chunks(std::uint64_t n, RngStream rng, const McOptions& opt, const std::string& tag,
                   const ChunkKernel& kernel);

enum class NormMode { raw, origin_normalized, dnk_normalized };

struct CharPolyQuery {
  EnsembleClass cls = EnsembleClass::A;
  int n = 1;
  int k = 1;
  std::vector<Complex> z;
  std::vector<Complex> w_star;
  NormMode mode = NormMode::raw;
  std::optional<Complex> z0;  // required by dnk_normalized
  bool shared_samples = true;  // dnk_normalized: same J for numerator and denominator
};

// Estimates < prod_j det(z_j - J) det(w*_j - J*) > by direct sampling.
//   raw               : the product itself (std::overflow_error if a sample leaves range)
//   origin_normalized : divided per sample by D_N(0,0)^k
//   dnk_normalized    : ratio to < |det(sqrt(d_N) s z0 - J)|^{2k} >
McEstimate estimate_charpoly(const CharPolyQuery& q, std::uint64_t n, RngStream rng,
                             const McOptions& opt = {});

enum class MatrixSpace { complex, quaternion, real };
enum class Weight { gaussian, quartic };

// Matrices handed to integrands: complex k x k; quaternion as 2k x 2k complex
// with 2x2 blocks [[a, b], [-b*, a*]]; real 2k x 2k (stored complex).
struct MatrixIntegrand {
  std::string name;
  std::function<Complex(const CMatrix&)> f;
};

// Quadratic form Tr A A^dagger of the representation matrix, and the quartic
// exponent: Tr (A^dagger A)^2 for the complex space, (1/2) Tr (A^dagger A)^2 otherwise.
double quadratic_form(const CMatrix& a);
double quartic_form(MatrixSpace space, const CMatrix& a);
int representation_dim(MatrixSpace space, int k);

// Draws A with density proportional to exp(-c Tr A A^dagger).
CMatrix sample_gaussian_matrix(MatrixSpace space, int k, double c, Philox& gen);
// int exp(-c Tr A A^dagger) [dA], Lebesgue measure over independent real components.
double gaussian_normalization(MatrixSpace space, int k, double c);

struct MatrixIntegralOptions {
  double proposal_c = 1.4142135623730951;  // Gaussian proposal exp(-c Tr A A^dagger)
  McOptions mc;
};

// int [dA] weight(A) f(A). Gaussian weight means exp(-c Tr A A^dagger) with
// c = proposal_c, sampled directly; quartic weight is reached by importance
// sampling from that Gaussian. A warning is attached when the effective
// sample size falls below 1% of n.
McEstimate estimate_matrix_integral(MatrixSpace space, int k, Weight weight,
                                    const MatrixIntegrand& integrand, std::uint64_t n, RngStream rng,
                                    const MatrixIntegralOptions& opt = {});

// log det of a square complex matrix by partial-pivot LU (principal branch of
// the imaginary part not enforced).
Complex log_det(const CMatrix& m);

}  // namespace rmt
