// Copyright 2026 The wclt Authors.
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

#include "wclt/limitlaw.hpp"
#include "wclt/processes.hpp"
#include "wclt/transport.hpp"

namespace {

void BM_W1SampleVsModel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const wclt::DistributionModel ref(wclt::ParetoTail{1.0, 4.0});
  const auto path = wclt::generate(wclt::IidProcess{ref}, n, 1);
  const wclt::SortedSample s(path.values);
  for (auto _ : state) benchmark::DoNotOptimize(wclt::w1_sample_vs_model(s, ref));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_W1SampleVsModel)->Range(1 << 10, 1 << 16);

void BM_W1TwoSamples(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const wclt::DistributionModel u(wclt::Uniform{0, 1});
  const wclt::SortedSample a(wclt::generate(wclt::IidProcess{u}, n, 1).values);
  const wclt::SortedSample b(wclt::generate(wclt::IidProcess{u}, n + 7, 2).values);
  for (auto _ : state) benchmark::DoNotOptimize(wclt::w1_two_samples(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_W1TwoSamples)->Range(1 << 10, 1 << 16);

void BM_GenerateIntermittent(benchmark::State& state) {
  const wclt::IntermittentMapProcess spec{0.25, 0.2, 0};
  for (auto _ : state) benchmark::DoNotOptimize(wclt::generate(spec, static_cast<std::size_t>(state.range(0)), 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateIntermittent)->Arg(1 << 16);

void BM_GenerateDoubling(benchmark::State& state) {
  const wclt::DoublingMapProcess spec{0.25, 0};
  for (auto _ : state) benchmark::DoNotOptimize(wclt::generate(spec, static_cast<std::size_t>(state.range(0)), 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateDoubling)->Arg(1 << 16);

void BM_SampleLimitFunctional(benchmark::State& state) {
  const wclt::DistributionModel u(wclt::Uniform{0, 1});
  const auto cg = wclt::covariance_iid(u, wclt::make_grid(u, static_cast<std::size_t>(state.range(0))).points);
  for (auto _ : state) benchmark::DoNotOptimize(wclt::sample_limit_functional(cg, 1024, 5, 1));
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_SampleLimitFunctional)->Arg(64)->Arg(256)->Arg(512);

}  // namespace
BENCHMARK_MAIN();
