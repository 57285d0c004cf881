#include <benchmark/benchmark.h>

#include "byzfed/estimators.hpp"
#include "byzfed/geometric_median.hpp"
#include "byzfed/rng.hpp"

namespace {

using byzfed::Matrix;
using byzfed::Vector;

std::vector<Vector> random_points(int count, int dim, std::uint64_t seed) {
  byzfed::Rng rng(seed);
  std::vector<Vector> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i) points.push_back(byzfed::gaussian_vector(dim, rng));
  return points;
}

void BM_WeiszfeldGm(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const auto points = random_points(count, dim, 7);
  byzfed::GmConfig cfg;
  cfg.max_iterations = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(byzfed::weiszfeld_gm(points, cfg));
  }
}
BENCHMARK(BM_WeiszfeldGm)->Args({18, 10000})->Args({18, 250000})->Args({3, 1000000})
    ->Unit(benchmark::kMillisecond);

void BM_PowerMethodTopr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  byzfed::Rng rng(11);
  const Matrix d = byzfed::gaussian_matrix(n, n / 2, rng);
  byzfed::PowerMethodConfig cfg;
  cfg.rank = r;
  cfg.iterations = 10;
  cfg.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(byzfed::topr_left_singular(d, cfg));
  }
}
BENCHMARK(BM_PowerMethodTopr)->Args({400, 10})->Args({1000, 60})->Unit(benchmark::kMillisecond);

void BM_SubspaceMedian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  const int nodes = static_cast<int>(state.range(2));
  byzfed::Rng rng(5);
  std::vector<Matrix> bases;
  bases.reserve(nodes);
  for (int l = 0; l < nodes; ++l) bases.push_back(byzfed::gaussian_matrix(n, r, rng));
  byzfed::EstimatorConfig cfg;
  cfg.rank = r;
  for (auto _ : state) {
    benchmark::DoNotOptimize(byzfed::subspace_median(bases, cfg, 1));
  }
}
BENCHMARK(BM_SubspaceMedian)->Args({200, 10, 18})->Args({600, 4, 18})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
