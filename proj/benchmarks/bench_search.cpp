#include <benchmark/benchmark.h>

#include "macsi/io.hpp"
#include "macsi/policy_search.hpp"

namespace {

using namespace macsi;

MacModel fixture(const char* name) {
  return load_channel_spec(std::string(MACSI_FIXTURE_DIR) + "/" + name).model;
}

void BM_EnumeratePolicies(benchmark::State& state) {
  const MacModel m = fixture("xorstate.json");
  const int resolution = static_cast<int>(state.range(0));
  for (auto _ : state) {
    PolicyEnumerator en(m, resolution);
    TeamPolicy p;
    std::uint64_t n = 0;
    while (en.next(p)) ++n;
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(policy_count(m, resolution)));
}
BENCHMARK(BM_EnumeratePolicies)->Arg(4)->Arg(8)->Arg(16);

void BM_MaximizeWeightedRate(benchmark::State& state) {
  const MacModel m = fixture("xorstate.json");
  SearchConfig cfg;
  cfg.restarts = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const AscentResult r = maximize_weighted_rate(m, 0.8, 0.6, cfg);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_MaximizeWeightedRate)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CapacityRegion(benchmark::State& state) {
  const MacModel m = fixture("xorstate.json");
  SearchConfig cfg;
  cfg.grid_resolution = static_cast<int>(state.range(0));
  cfg.restarts = 2;
  for (auto _ : state) {
    const RegionResult r = capacity_region(m, cfg);
    benchmark::DoNotOptimize(r.region.vertices().data());
  }
}
BENCHMARK(BM_CapacityRegion)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
