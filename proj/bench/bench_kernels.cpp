#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mrw/kernels.hpp"
#include "mrw/mctest.hpp"

using namespace mrw;

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 engine(1);
  std::normal_distribution<double> normal(0.0, 0.01);
  std::vector<double> x(n);
  for (auto& v : x) v = normal(engine);
  return x;
}

const std::vector<double> kQs{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};

template <bool Parallel>
void moments(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto t = Parallel ? kernels::structure_moments(x, kQs, 30, 415.0)
                      : reference::structure_moments(x, kQs, 30, 415.0);
    benchmark::DoNotOptimize(t.moments.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void autocov(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto c = Parallel ? kernels::lagged_autocov(x, 100) : reference::lagged_autocov(x, 100);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution Exec>
void null_band(benchmark::State& state) {
  MrwParams p;
  const auto sims = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto v = null_distribution(p, sims, 1250, 0, {}, Exec);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(moments<false>)->Name("structure_moments/serial")->Arg(1250)->Arg(1 << 16);
BENCHMARK(moments<true>)->Name("structure_moments/openmp")->Arg(1250)->Arg(1 << 16);
BENCHMARK(autocov<false>)->Name("lagged_autocov/serial")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(autocov<true>)->Name("lagged_autocov/openmp")->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(null_band<Execution::Serial>)->Name("null_distribution/serial")->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(null_band<Execution::Parallel>)->Name("null_distribution/openmp")->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
