// Copyright 2026 The nbpm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "nbpm/experiments.hpp"
#include "nbpm/levy_tail.hpp"
#include "nbpm/random_measures.hpp"
#include "nbpm/special_functions.hpp"

namespace {

using namespace nbpm;

void BM_UpperIncompleteGamma(benchmark::State& state) {
  double x = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(upper_incomplete_gamma(-0.5, x));
    x = x < 30.0 ? x * 1.1 : 1e-6;
  }
}
BENCHMARK(BM_UpperIncompleteGamma);

void BM_GammaQuantileUpper(benchmark::State& state) {
  double y = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_quantile_upper(0.05, y));
    y = y < 0.98 ? y + 0.01 : 0.01;
  }
}
BENCHMARK(BM_GammaQuantileUpper);

void BM_TailInverse(benchmark::State& state) {
  const LevyTail tail = state.range(0) == 0 ? LevyTail::gamma(3.0)
                                            : LevyTail::generalized_gamma(0.5);
  double y = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tail_inverse(tail, y));
    y = y < 1e3 ? y * 1.3 : 1e-3;
  }
}
BENCHMARK(BM_TailInverse)->Arg(0)->Arg(1);

void BM_SamplePdpSeries(benchmark::State& state) {
  const BaseMeasure base = BaseMeasure::uniform01();
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample_pdp_series({0.5, 1.0}, base, TruncationPolicy::fixed(n), seed++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePdpSeries)->Arg(400)->Arg(4000);

void BM_StickBreaking(benchmark::State& state) {
  const BaseMeasure base = BaseMeasure::uniform01();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_pdp_stick_breaking(0.5, 1.0, base, 2000, true, seed++));
  }
}
BENCHMARK(BM_StickBreaking);

void BM_KolmogorovDistance(benchmark::State& state) {
  const BaseMeasure base = BaseMeasure::uniform01();
  const DiscreteMeasure m = sample_pdp_series({0.5, 1.0}, base, TruncationPolicy::fixed(400), 1);
  for (auto _ : state) benchmark::DoNotOptimize(kolmogorov_distance(m, base));
}
BENCHMARK(BM_KolmogorovDistance);

}  // namespace

BENCHMARK_MAIN();
