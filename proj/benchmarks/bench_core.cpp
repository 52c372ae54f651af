#include <benchmark/benchmark.h>

#include "macsi/information.hpp"
#include "macsi/model.hpp"
#include "macsi/policy_search.hpp"
#include "macsi/region.hpp"
#include "macsi/rng.hpp"

namespace {

using namespace macsi;

// Synthetic model with adjustable state count: quantizers halve the state
// index for encoder a and drop it for encoder b; kernel is a noisy adder.
MacModel synthetic_model(int states) {
  MacModel m;
  m.state_prior.assign(states, 1.0 / states);
  m.input_size_a = 2;
  m.input_size_b = 2;
  m.output_size = 3;
  m.quantizer_a.resize(states);
  m.quantizer_b.assign(states, 0);
  for (int s = 0; s < states; ++s) m.quantizer_a[s] = s / 2;
  m.obs_size_a = (states + 1) / 2;
  m.obs_size_b = 1;
  m.kernel = Tensor({states, 2, 2, 3});
  for (int s = 0; s < states; ++s) {
    const double flip = 0.05 + 0.9 * s / std::max(states - 1, 1);
    for (int xa = 0; xa < 2; ++xa) {
      for (int xb = 0; xb < 2; ++xb) {
        for (int y = 0; y < 3; ++y) {
          const int idx[4] = {s, xa, xb, y};
          m.kernel.at(idx) = (y == xa + xb) ? 1.0 - flip : flip / 2.0;
        }
      }
    }
  }
  return m;
}

void BM_BuildJoint(benchmark::State& state) {
  const MacModel m = synthetic_model(static_cast<int>(state.range(0)));
  const TeamPolicy p = uniform_policy(m);
  for (auto _ : state) {
    JointDistribution j = build_joint(m, p);
    benchmark::DoNotOptimize(j.t.data());
  }
}
BENCHMARK(BM_BuildJoint)->Arg(2)->Arg(8)->Arg(16);

void BM_ConditionalMutualInformation(benchmark::State& state) {
  const MacModel m = synthetic_model(static_cast<int>(state.range(0)));
  const JointDistribution j = build_joint(m, uniform_policy(m));
  for (auto _ : state) {
    const double bits = cond_mutual_info(j, {Var::Xa, Var::Xb}, {Var::Y}, {Var::S});
    benchmark::DoNotOptimize(bits);
  }
}
BENCHMARK(BM_ConditionalMutualInformation)->Arg(2)->Arg(8)->Arg(16);

void BM_PentagonOfPolicy(benchmark::State& state) {
  const MacModel m = synthetic_model(static_cast<int>(state.range(0)));
  const TeamPolicy p = uniform_policy(m);
  for (auto _ : state) {
    const Pentagon pent = pentagon_of_policy(m, p);
    benchmark::DoNotOptimize(pent.i_sum());
  }
}
BENCHMARK(BM_PentagonOfPolicy)->Arg(2)->Arg(8);

void BM_HullUnion(benchmark::State& state) {
  Rng rng(1);
  std::vector<Pentagon> pentagons;
  for (int i = 0; i < state.range(0); ++i) {
    const double ia = rng.uniform01(), ib = rng.uniform01();
    const double lo = std::max(ia, ib), hi = ia + ib;
    pentagons.emplace_back(ia, ib, lo + (hi - lo) * rng.uniform01());
  }
  for (auto _ : state) {
    Polygon poly = hull_union(pentagons);
    benchmark::DoNotOptimize(poly.vertices().data());
  }
}
BENCHMARK(BM_HullUnion)->Range(64, 1 << 14);

}  // namespace

BENCHMARK_MAIN();
