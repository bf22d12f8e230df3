#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ewpo/inference.hpp"
#include "ewpo/kernels.hpp"

namespace {

using namespace ewpo;

struct Data {
  std::vector<double> x, y;
};

Data make_data(std::size_t n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd;
  Data d{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    d.x[i] = 2.0 * nd(rng);
    d.y[i] = 1.0 + 0.5 * d.x[i] + nd(rng);
  }
  return d;
}

const kernels::PairSumRequest kFullAbs{PairKind::FullPairwise, WeightKind::AbsDeltaX, Method::WeightedAverage, false};
const kernels::PairSumRequest kFullEuclid{PairKind::FullPairwise, WeightKind::Euclidean, Method::WeightedAverage,
                                          true};

void BM_Reference(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pair_sums_reference(d.x, d.y, kFullAbs));
  state.SetComplexityN(state.range(0));
}

void BM_Parallel(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pair_sums_parallel(d.x, d.y, kFullAbs));
  state.SetComplexityN(state.range(0));
}

void BM_ParallelEuclidean(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pair_sums_parallel(d.x, d.y, kFullEuclid));
  state.SetComplexityN(state.range(0));
}

void BM_ClosedForm(benchmark::State& state) {
  const auto d = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pair_sums_closed_form(d.x, d.y, kFullAbs));
  state.SetComplexityN(state.range(0));
}

void BM_BrownianSerial(benchmark::State& state) {
  const BrownianSimConfig cfg{static_cast<std::size_t>(state.range(0)), 1000, 1, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_prop2_null_serial(cfg));
}

void BM_BrownianParallel(benchmark::State& state) {
  const BrownianSimConfig cfg{static_cast<std::size_t>(state.range(0)), 1000, 1, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_prop2_null(cfg));
}

}  // namespace

BENCHMARK(BM_Reference)->RangeMultiplier(4)->Range(256, 4096)->Complexity();
BENCHMARK(BM_Parallel)->RangeMultiplier(4)->Range(256, 4096)->Complexity();
BENCHMARK(BM_ParallelEuclidean)->RangeMultiplier(4)->Range(256, 4096)->Complexity();
BENCHMARK(BM_ClosedForm)->RangeMultiplier(4)->Range(256, 65536)->Complexity();
BENCHMARK(BM_BrownianSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BrownianParallel)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
