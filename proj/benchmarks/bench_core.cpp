#include <benchmark/benchmark.h>

#include "rmt/asymptotics.hpp"
#include "rmt/charpoly.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/kpairs.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/specfun.hpp"

using namespace rmt;

static void BM_TruncExp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Complex x(0.7 * n, 0.3 * n);
  for (auto _ : state) benchmark::DoNotOptimize(trunc_exp_scaled(n, x));
}
BENCHMARK(BM_TruncExp)->Arg(10)->Arg(100)->Arg(1000);

static void BM_UpperGammaComplex(benchmark::State& state) {
  const Complex x(12.0, -3.0);
  for (auto _ : state) benchmark::DoNotOptimize(upper_gamma_reg(20.5, x));
}
BENCHMARK(BM_UpperGammaComplex);

static void BM_ErfcComplex(benchmark::State& state) {
  const Complex z(2.5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(erfc_c(z));
}
BENCHMARK(BM_ErfcComplex);

static void BM_Pfaffian(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Philox g(RngStream{1, 0});
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      a(i, j) = Complex(g.normal(), g.normal());
      a(j, i) = -a(i, j);
    }
  for (auto _ : state) benchmark::DoNotOptimize(pfaffian(a));
}
BENCHMARK(BM_Pfaffian)->Arg(4)->Arg(12)->Arg(64);

static void BM_Sample(benchmark::State& state) {
  const auto cls = static_cast<EnsembleClass>(state.range(0));
  Philox g(RngStream{2, 0});
  for (auto _ : state) benchmark::DoNotOptimize(sample(cls, 8, g));
}
BENCHMARK(BM_Sample)->DenseRange(0, 2);

static void BM_Eigenvalues(benchmark::State& state) {
  const MatrixSample s = sample(EnsembleClass::A, static_cast<int>(state.range(0)), RngStream{3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(scaled_eigenvalues(s));
}
BENCHMARK(BM_Eigenvalues)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_DnPair(benchmark::State& state) {
  const auto cls = static_cast<EnsembleClass>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dn_pair(cls, 200, Complex(150.0, 20.0)));
}
BENCHMARK(BM_DnPair)->DenseRange(0, 2);

static void BM_EdgeLimit(benchmark::State& state) {
  const auto cls = static_cast<EnsembleClass>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(edge_limit(cls, Complex(-1.3, 0.0)));
}
BENCHMARK(BM_EdgeLimit)->DenseRange(0, 2);

static void BM_FiniteNEdge(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(finite_n_edge(EnsembleClass::AII, 1600, 0.5));
}
BENCHMARK(BM_FiniteNEdge);

static void BM_EstimateCharpoly(benchmark::State& state) {
  const auto cls = static_cast<EnsembleClass>(state.range(0));
  McOptions opt;
  opt.threads = 1;
  const CharPolyQuery q{cls, 8, 2, {0.3, 0.7}, {0.1, -0.4}, NormMode::raw, std::nullopt, true};
  for (auto _ : state) benchmark::DoNotOptimize(estimate_charpoly(q, 10000, {4, 0}, opt));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_EstimateCharpoly)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_BulkGroupIntegral(benchmark::State& state) {
  const auto cls = static_cast<EnsembleClass>(state.range(0));
  McOptions opt;
  opt.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(bulk_group_integral(cls, 2, {0.4, -0.3}, {0.2, 0.5}, 10000, {5, 0}, opt));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_BulkGroupIntegral)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_OpKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(op_kernel_formula_scaled(n, {Complex(0.3, 0.1), Complex(0.5, -0.2)}, {0.2, 0.4}));
}
BENCHMARK(BM_OpKernel)->Arg(10)->Arg(400);

BENCHMARK_MAIN();
