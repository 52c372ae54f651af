#include <benchmark/benchmark.h>

#include "macsi/io.hpp"
#include "macsi/oracle.hpp"
#include "macsi/rng.hpp"

namespace {

using namespace macsi;

MacModel fixture(const char* name) {
  return load_channel_spec(std::string(MACSI_FIXTURE_DIR) + "/" + name).model;
}

void BM_CheckFactorization(benchmark::State& state) {
  const MacModel m = fixture("xorstate.json");
  const int n = static_cast<int>(state.range(0));
  Rng rng(4);
  const BlockEncoder ea = random_encoder(m, Side::A, n, 4, rng);
  const BlockEncoder eb = random_encoder(m, Side::B, n, 4, rng);
  for (auto _ : state) {
    const double dev = check_factorization(m, ea, eb);
    benchmark::DoNotOptimize(dev);
  }
}
BENCHMARK(BM_CheckFactorization)->Arg(1)->Arg(2)->Arg(3);

void BM_FanoBounds(benchmark::State& state) {
  const MacModel m = fixture("xorstate.json");
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  BlockCode code;
  code.enc_a = random_encoder(m, Side::A, n, 2, rng);
  code.enc_b = random_encoder(m, Side::B, n, 2, rng);
  code.dec = map_decoder(m, code.enc_a, code.enc_b);
  for (auto _ : state) {
    const FanoBounds fb = fano_bounds(m, code);
    benchmark::DoNotOptimize(fb.bound_sum);
  }
}
BENCHMARK(BM_FanoBounds)->Arg(1)->Arg(2)->Arg(3);

void BM_BruteForceBestCode(benchmark::State& state) {
  const MacModel m = fixture("adder.json");
  for (auto _ : state) {
    const BestCodeResult best =
        brute_force_best_code(m, static_cast<int>(state.range(0)), 2, 2);
    benchmark::DoNotOptimize(best.error_probability);
  }
}
BENCHMARK(BM_BruteForceBestCode)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SimulateBlock(benchmark::State& state) {
  const MacModel m = fixture("adder.json");
  const BestCodeResult best = brute_force_best_code(m, 1, 2, 2);
  for (auto _ : state) {
    const double rate =
        simulate_block(m, best.code, static_cast<int>(state.range(0)), 17);
    benchmark::DoNotOptimize(rate);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateBlock)->Range(1 << 10, 1 << 14);

}  // namespace

BENCHMARK_MAIN();
