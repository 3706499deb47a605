#include <benchmark/benchmark.h>

#include "gstree/cantor.hpp"
#include "gstree/montecarlo.hpp"
#include "gstree/rng.hpp"
#include "gstree/sequence.hpp"

namespace {

using namespace gstree;

void BM_GaussianGen(benchmark::State& state) {
  GaussianGen gauss(42);
  double acc = 0.0;
  for (auto _ : state) acc += gauss();
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_GaussianGen);

void BM_DfsTraversal(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  RunConfig config{DegreeProfile::constant(2), SequenceModel::geometric(0.5),
                   depth, 1, 7};
  for (auto _ : state) {
    auto m = sample_level_maxima(config, 0);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>((1LL << (depth + 1)) - 2));
}
BENCHMARK(BM_DfsTraversal)->Arg(12)->Arg(16)->Arg(20);

void BM_Fwht(benchmark::State& state) {
  std::vector<double> data(std::size_t{1} << state.range(0), 1.0);
  for (auto _ : state) {
    fwht_inplace(data);
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(BM_Fwht)->Arg(12)->Arg(16)->Arg(20);

void BM_QFunctional(benchmark::State& state) {
  const SequenceModel model = SequenceModel::power(2.0);
  for (auto _ : state) {
    auto r = q_functional(model, state.range(0));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_QFunctional)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
