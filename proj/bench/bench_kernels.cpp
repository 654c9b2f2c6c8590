// OpenMP kernels against their serial references, and decimation against a
// dense eigensolve.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "gasket/decimation.hpp"
#include "gasket/eigenbasis.hpp"
#include "gasket/kernels.hpp"
#include "gasket/laplacian.hpp"
#include "gasket/szego.hpp"
#include "gasket/topology.hpp"

using namespace gasket;

namespace {

const Gasket& gasket7() {
  static const Gasket g(7);
  return g;
}
const EigenspaceBuilder& builder() {
  static const EigenspaceBuilder b(gasket7(), 6);
  return b;
}

// Six-series birth-j eigenspace sampled at level j + 1 (interior rows).
const RawEigenspace& six_space(int j) {
  static std::map<int, RawEigenspace> cache;
  auto it = cache.find(j);
  if (it == cache.end()) {
    const int mq = default_sample_level(j);
    it = cache.emplace(j, builder().build(canonical_descriptor(Series::Six, j, mq), mq)).first;
  }
  return it->second;
}

// Random coarse columns on V_{k-1}, zero on V_0.
Eigen::MatrixXd coarse_columns(int k, Eigen::Index cols) {
  const auto& level = gasket7().level(k - 1);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  Eigen::MatrixXd u(static_cast<Eigen::Index>(level.num_vertices()), cols);
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < cols; ++c) u(r, c) = level.vertex(static_cast<std::size_t>(r)).boundary ? 0.0 : n(rng);
  return u;
}

void BM_Extend(benchmark::State& state, bool parallel) {
  const int k = static_cast<int>(state.range(0));
  const auto coarse = coarse_columns(k, 64);
  for (auto _ : state) {
    auto out = parallel ? kernels::extend_columns(gasket7(), k, coarse, 0.7)
                        : kernels::extend_columns_serial(gasket7(), k, coarse, 0.7);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Gram(benchmark::State& state, bool parallel) {
  const auto& u = six_space(static_cast<int>(state.range(0))).vectors;
  Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(u.rows(), 1.0, 2.0);
  for (auto _ : state) {
    auto m = parallel ? kernels::weighted_gram(u, w) : kernels::weighted_gram_serial(u, w);
    benchmark::DoNotOptimize(m.data());
  }
}

void BM_Localize(benchmark::State& state, bool parallel) {
  const auto& raw = six_space(static_cast<int>(state.range(0)));
  const int N = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto b = localize_basis(gasket7(), raw, N, {kNullspaceThreshold, parallel});
    benchmark::DoNotOptimize(b.vectors.data());
  }
}

void BM_SpectrumDecimation(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto t = enumerate_spectrum(m);
    benchmark::DoNotOptimize(t.entries.data());
  }
}

void BM_SpectrumDense(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto L = assemble_dirichlet_laplacian(LevelGraph(gasket7().level(m)));
  for (auto _ : state) {
    auto s = dense_dirichlet_spectrum(L, false);
    benchmark::DoNotOptimize(s.values.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Extend, serial, false)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Extend, openmp, true)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Gram, serial, false)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Gram, openmp, true)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Localize, serial, false)->Args({4, 1})->Args({5, 2})->Args({5, 3})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Localize, openmp, true)->Args({4, 1})->Args({5, 2})->Args({5, 3})->Args({6, 5})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectrumDecimation)->DenseRange(3, 6)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SpectrumDense)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
