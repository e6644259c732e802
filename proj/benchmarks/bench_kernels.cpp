#include <benchmark/benchmark.h>

#include "wvgg/geom_quantities.hpp"
#include "wvgg/special_fn.hpp"
#include "wvgg/thorin_measures.hpp"
#include "wvgg/wvgg_density.hpp"

using namespace wvgg;

namespace {

void BM_KappaBessel(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0)) / 2.0;
  const auto grid = log_grid(1e-3, 50.0, 256);
  for (auto _ : state)
    for (double w : grid) benchmark::DoNotOptimize(kappa_bessel(rho, w));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_KappaBessel)->Arg(0)->Arg(1)->Arg(2)->Arg(5);

void BM_HDensityAtomic(benchmark::State& state) {
  const Vector mu = (Vector(2) << 1.0, 0.3).finished();
  const WvggParams p(Vector::Zero(2), mu, CovMatrix::identity(2),
                     matrix_gamma_measure({1.0, 0.5}, {(Vector(2) << 1, 1).finished(), (Vector(2) << 0.5, 2).finished()}));
  const Vector s = (Vector(2) << 0.6, 0.8).finished();
  for (auto _ : state) benchmark::DoNotOptimize(h_density(p, s, 0.7).value);
}
BENCHMARK(BM_HDensityAtomic);

void BM_HDensityCircle(benchmark::State& state) {
  const Vector mu = (Vector(2) << 1.0, 0.3).finished();
  const WvggParams p(Vector::Zero(2), mu, CovMatrix::identity(2), circle_measure("theta"));
  const Vector s = (Vector(2) << 0.6, 0.8).finished();
  for (auto _ : state) benchmark::DoNotOptimize(h_density(p, s, 0.7).value);
}
BENCHMARK(BM_HDensityCircle)->Unit(benchmark::kMillisecond);

void BM_UspInfimum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Vector mu = Vector::LinSpaced(n, 1.0, -0.5);
  Matrix s = Matrix::Identity(n, n);
  for (int k = 0; k + 1 < n; ++k) s(k, k + 1) = s(k + 1, k) = 0.3;
  const QuantityContext ctx(mu, CovMatrix(s));
  for (auto _ : state) benchmark::DoNotOptimize(usp_infimum(ctx, mu).value);
}
BENCHMARK(BM_UspInfimum)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
