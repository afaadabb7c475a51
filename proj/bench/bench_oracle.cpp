#include <benchmark/benchmark.h>

#include "uavrelay/oracle.hpp"

using namespace uavrelay;

namespace {

Scenario reference() {
  Scenario s;
  s.channel = ChannelParams::make(2e9, 1.0232929922807541, 125.89254117941675);
  s.D = 1000;
  s.msi_x = 500;
  s.msi_y = 400;
  s.p_tx = 80;
  s.p_uav = 1;
  s.p_msi = 80;
  s.h_min = 10;
  s.h_max = 300;
  s.d_min = 4;
  return s;
}

void BM_grid_parallel(benchmark::State& st) {
  auto s = reference();
  const std::size_t n = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(grid_search_dual(s, {n, n}));
}

void BM_grid_serial(benchmark::State& st) {
  auto s = reference();
  const std::size_t n = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(grid_search_dual_serial(s, {n, n}));
}

void BM_baseline_parallel(benchmark::State& st) {
  auto s = reference();
  for (auto _ : st) benchmark::DoNotOptimize(random_placement_baseline(s, 10, st.range(0), 1));
}

void BM_baseline_serial(benchmark::State& st) {
  auto s = reference();
  for (auto _ : st) benchmark::DoNotOptimize(random_placement_baseline_serial(s, 10, st.range(0), 1));
}

}  // namespace

BENCHMARK(BM_grid_parallel)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_grid_serial)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_baseline_parallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_baseline_serial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
