// SPDX-License-Identifier: Apache-2.0

#include <gcamusic/harness.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace gcamusic;

const std::vector<double> kSix{-0.7, -0.5, -0.3, 0.3, 0.5, 0.7};

TypeIILayout nested_layout(int n1, int n2, int subarrays) {
  return compose_type2(build_nested2(n1, n2), subarrays, 1).layout;
}

void BM_SpatialSmooth(benchmark::State& state) {
  const int n1 = static_cast<int>(state.range(0));
  const auto g = build_nested2(n1, n1);
  const CMatrix r = exact_covariance(g, SourceSet(kSix), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spatial_smooth(covariance_to_coarray(r, g)));
  }
  state.counters["M"] = static_cast<double>((difference_coarray(g).sdof() + 1) / 2);
}
BENCHMARK(BM_SpatialSmooth)->DenseRange(3, 9, 2);

void BM_HermitianEigen(benchmark::State& state) {
  const auto g = build_nested2(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const auto rss = spatial_smooth(covariance_to_coarray(exact_covariance(g, SourceSet(kSix), 1.0), g));
  RVector values;
  CMatrix vectors;
  for (auto _ : state) {
    hermitian_eigen(rss.matrix, values, vectors);
    benchmark::DoNotOptimize(vectors.data());
  }
  state.counters["M"] = rss.window;
}
BENCHMARK(BM_HermitianEigen)->DenseRange(3, 9, 2);

void BM_GcaSpectrum(benchmark::State& state) {
  const auto layout = nested_layout(4, 3, static_cast<int>(state.range(0)));
  std::vector<SubspaceDecomposition> subs;
  for (int l = 0; l < layout.subarrays; ++l) {
    const CMatrix r = exact_covariance(layout.subarray_positions(l), SourceSet(kSix), 1.0);
    subs.push_back(signal_subspace(spatial_smooth(covariance_to_coarray(r, layout.base)), 6));
  }
  const SearchOptions opts{static_cast<int>(state.range(1)), {}};
  for (auto _ : state) benchmark::DoNotOptimize(gca_music(subs, 6, opts));
}
BENCHMARK(BM_GcaSpectrum)->ArgsProduct({{1, 3, 6}, {501, 2001, 8001}})->Unit(benchmark::kMicrosecond);

void BM_Trial(benchmark::State& state) {
  ExperimentConfig c;
  c.geometries = {GeometrySpec{GeometryKind::Nested2, 7, 4, 3}};
  c.thetas = kSix;
  const auto algo = static_cast<Algorithm>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(c, c.geometries[0], 10.0, algo, trial++));
  state.SetLabel(std::string(to_string(algo)));
}
BENCHMARK(BM_Trial)
    ->Arg(static_cast<int>(Algorithm::Gca))
    ->Arg(static_cast<int>(Algorithm::Avca))
    ->Arg(static_cast<int>(Algorithm::GMusic))
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
